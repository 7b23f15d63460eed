#pragma once

#include <string>
#include <vector>

#include "afslab/coverage.hpp"

namespace afslab {

/// A linear term, row, and model in the shape the LP text format uses.
struct MilpTerm {
    double coef = 0.0;
    std::string var;
};

struct MilpRow {
    std::string name;
    std::vector<MilpTerm> terms;
    char sense = 'L';  // 'L' (<=), 'E' (=), 'G' (>=)
    double rhs = 0.0;
};

struct MilpModel {
    std::vector<MilpTerm> objective;  // maximized
    std::vector<MilpRow> rows;
    std::vector<std::pair<std::string, double>> upper_bounds;
    std::vector<std::string> binaries;
};

bool operator==(const MilpTerm& a, const MilpTerm& b);
bool operator==(const MilpRow& a, const MilpRow& b);
bool operator==(const MilpModel& a, const MilpModel& b);

/// Number of distinct variables appearing anywhere in the model.
std::size_t variable_count(const MilpModel& m);

/// Full mixed-integer formulation of the instance: station binaries X_i,
/// per-path usage binaries Y_r_s_k, pair coverage binaries yod_r_s, node
/// coverage z_r, and position-indexed fuel variables B_r_s_k_t and
/// l_r_s_k_t (a node visited on both legs gets one instance per visit).
/// Constraint families: fuelcap (tank capacity on used paths), flowub and
/// flowlb (fuel conservation on used paths), refuelopen (refueling only at
/// open stations), cover_any and cover_need (pair coverage looks at path
/// usage), nodecov (z definition), budget, initsof (fuel at trip start).
/// The big-M is range + total length of the longest catalog round trip;
/// rows that gate a sum of many variables scale it by the number of summed
/// terms so the gate can never bind a legitimate solution.
MilpModel build_milp(const Instance& inst);

/// Canonical LP text (Maximize / Subject To / Bounds / Binaries / End).
std::string write_lp(const MilpModel& m);

/// Parses exactly the canonical subset write_lp emits;
/// write_lp(read_lp(text)) == text.
MilpModel read_lp(const std::string& text);

/// build + write to a file. Throws Error on I/O failure.
void export_milp(const Instance& inst, const std::string& path);

}  // namespace afslab
