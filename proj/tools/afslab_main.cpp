#include "afslab/labcli.hpp"

int main(int argc, char** argv) { return afslab::run_cli(argc, argv); }
