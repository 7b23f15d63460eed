#include "afslab/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "afslab/common.hpp"

namespace afslab {

namespace {

constexpr std::size_t kWrapWidth = 200;

std::string var_x(NodeId i) { return "X_" + std::to_string(i); }

std::string var_z(NodeId r) { return "z_" + std::to_string(r); }

std::string pair_suffix(NodeId r, NodeId s) {
    return std::to_string(r) + "_" + std::to_string(s);
}

std::string path_suffix(NodeId r, NodeId s, std::size_t k1) {
    return pair_suffix(r, s) + "_" + std::to_string(k1);
}

std::string pos_suffix(NodeId r, NodeId s, std::size_t k1, std::size_t t) {
    return path_suffix(r, s, k1) + "_" + std::to_string(t);
}

struct PathRef {
    NodeId r = 0;
    NodeId s = 0;
    std::size_t k1 = 0;  // 1-based rank within the pair's catalog entry
    const RoundTripPath* path = nullptr;
};

std::vector<PathRef> collect_paths(const Instance& inst) {
    std::vector<PathRef> out;
    for (const auto& [key, paths] : inst.catalog->entries) {
        for (std::size_t k = 0; k < paths.size(); ++k) {
            out.push_back({key.first, key.second, k + 1, &paths[k]});
        }
    }
    return out;
}

class LineWrapper {
public:
    explicit LineWrapper(std::string head) : line_(std::move(head)) {}

    void add(const std::string& token) {
        if (line_.size() + 1 + token.size() > kWrapWidth && !fresh_) {
            out_ += line_;
            out_ += '\n';
            line_ = "   ";
            fresh_ = true;
        }
        line_ += ' ';
        line_ += token;
        fresh_ = false;
    }

    std::string finish() {
        out_ += line_;
        out_ += '\n';
        return std::move(out_);
    }

private:
    std::string out_;
    std::string line_;
    bool fresh_ = true;
};

std::string term_token(const MilpTerm& term, bool first) {
    std::string out;
    if (term.coef < 0) {
        out = "- ";
    } else if (!first) {
        out = "+ ";
    }
    out += fmt_double(std::abs(term.coef));
    out += ' ';
    out += term.var;
    return out;
}

void write_statement(std::string& out, const std::string& name,
                     const std::vector<MilpTerm>& terms,
                     const std::string& trailer) {
    LineWrapper wrap(" " + name + ":");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        wrap.add(term_token(terms[i], i == 0));
    }
    if (!trailer.empty()) wrap.add(trailer);
    out += wrap.finish();
}

[[noreturn]] void bad_lp(const std::string& message) {
    throw ParseError(ParseError::Kind::BadFormat, "lp: " + message);
}

bool parse_number(const std::string& token, double& value) {
    const char* begin = token.c_str();
    char* end = nullptr;
    value = std::strtod(begin, &end);
    return end == begin + token.size() && !token.empty();
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

// One named statement inside Maximize / Subject To: terms followed by an
// optional sense and right-hand side.
struct Statement {
    std::string name;
    std::vector<MilpTerm> terms;
    char sense = 0;  // 0 when the statement has no comparison (objective)
    double rhs = 0.0;
};

Statement parse_statement(const std::string& name,
                          const std::vector<std::string>& tokens) {
    Statement st;
    st.name = name;
    double sign = 1.0;
    bool have_sign = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        if (st.sense != 0) bad_lp("trailing tokens after right-hand side in " + name);
        if (tok == "+" || tok == "-") {
            if (have_sign) bad_lp("doubled sign in " + name);
            sign = tok == "-" ? -1.0 : 1.0;
            have_sign = true;
            continue;
        }
        if (tok == "<=" || tok == "=" || tok == ">=") {
            if (have_sign) bad_lp("dangling sign before comparison in " + name);
            if (i + 1 >= tokens.size()) bad_lp("missing right-hand side in " + name);
            double rhs = 0.0;
            if (!parse_number(tokens[i + 1], rhs)) {
                bad_lp("bad right-hand side in " + name);
            }
            st.sense = tok == "<=" ? 'L' : (tok == "=" ? 'E' : 'G');
            st.rhs = rhs;
            ++i;
            continue;
        }
        double coef = 0.0;
        if (!parse_number(tok, coef)) bad_lp("expected coefficient in " + name);
        if (i + 1 >= tokens.size()) bad_lp("coefficient without variable in " + name);
        st.terms.push_back({sign * coef, tokens[i + 1]});
        ++i;
        sign = 1.0;
        have_sign = false;
    }
    if (have_sign) bad_lp("dangling sign in " + name);
    return st;
}

}  // namespace

bool operator==(const MilpTerm& a, const MilpTerm& b) {
    return a.coef == b.coef && a.var == b.var;
}

bool operator==(const MilpRow& a, const MilpRow& b) {
    return a.name == b.name && a.terms == b.terms && a.sense == b.sense &&
           a.rhs == b.rhs;
}

bool operator==(const MilpModel& a, const MilpModel& b) {
    return a.objective == b.objective && a.rows == b.rows &&
           a.upper_bounds == b.upper_bounds && a.binaries == b.binaries;
}

std::size_t variable_count(const MilpModel& m) {
    std::set<std::string> names;
    for (const auto& term : m.objective) names.insert(term.var);
    for (const auto& row : m.rows) {
        for (const auto& term : row.terms) names.insert(term.var);
    }
    for (const auto& [var, bound] : m.upper_bounds) names.insert(var);
    for (const auto& var : m.binaries) names.insert(var);
    return names.size();
}

MilpModel build_milp(const Instance& inst) {
    const Network& net = *inst.network;
    const std::vector<PathRef> paths = collect_paths(inst);

    double longest = 0.0;
    for (const PathRef& p : paths) {
        longest = std::max(longest, p.path->total_length());
    }
    const double big_m = inst.vehicle.range + longest;

    MilpModel m;

    for (NodeId r : net.nodes()) {
        m.objective.push_back({inst.probabilities.at(r), var_z(r)});
    }

    // Tank capacity at every position of every path.
    for (const PathRef& p : paths) {
        const auto& visits = p.path->visits;
        for (std::size_t t = 0; t < visits.size(); ++t) {
            MilpRow row;
            row.name = "fuelcap_" + pos_suffix(p.r, p.s, p.k1, t);
            row.terms = {{1.0, "B_" + pos_suffix(p.r, p.s, p.k1, t)},
                         {1.0, "l_" + pos_suffix(p.r, p.s, p.k1, t)},
                         {big_m, "Y_" + path_suffix(p.r, p.s, p.k1)}};
            row.sense = 'L';
            row.rhs = big_m + inst.vehicle.range;
            m.rows.push_back(std::move(row));
        }
    }

    // Fuel conservation across each traversed link, both directions.
    for (int dir = 0; dir < 2; ++dir) {
        for (const PathRef& p : paths) {
            const auto& visits = p.path->visits;
            for (std::size_t t = 0; t + 1 < visits.size(); ++t) {
                const double d = net.link_distance(visits[t], visits[t + 1]);
                MilpRow row;
                const std::string here = pos_suffix(p.r, p.s, p.k1, t);
                const std::string next = pos_suffix(p.r, p.s, p.k1, t + 1);
                if (dir == 0) {
                    row.name = "flowub_" + here;
                    row.terms = {{1.0, "B_" + here},
                                 {1.0, "l_" + here},
                                 {-1.0, "B_" + next},
                                 {big_m, "Y_" + path_suffix(p.r, p.s, p.k1)}};
                    row.rhs = big_m + d;
                } else {
                    row.name = "flowlb_" + here;
                    row.terms = {{-1.0, "B_" + here},
                                 {-1.0, "l_" + here},
                                 {1.0, "B_" + next},
                                 {big_m, "Y_" + path_suffix(p.r, p.s, p.k1)}};
                    row.rhs = big_m - d;
                }
                row.sense = 'L';
                m.rows.push_back(std::move(row));
            }
        }
    }

    // Refueling at a site requires an open station there. The gate sums
    // every visit of the site across the whole catalog, so its coefficient
    // scales with that count.
    for (NodeId i : inst.candidates) {
        MilpRow row;
        row.name = "refuelopen_" + std::to_string(i);
        std::size_t hits = 0;
        for (const PathRef& p : paths) {
            const auto& visits = p.path->visits;
            for (std::size_t t = 0; t < visits.size(); ++t) {
                if (visits[t] == i) {
                    row.terms.push_back({1.0, "l_" + pos_suffix(p.r, p.s, p.k1, t)});
                    ++hits;
                }
            }
        }
        row.terms.push_back(
            {-(static_cast<double>(hits) * big_m), var_x(i)});
        row.sense = 'L';
        row.rhs = 0.0;
        m.rows.push_back(std::move(row));
    }

    // Pair coverage follows path usage in both directions.
    for (const auto& [key, entry] : inst.catalog->entries) {
        MilpRow row;
        row.name = "cover_any_" + pair_suffix(key.first, key.second);
        for (std::size_t k = 0; k < entry.size(); ++k) {
            row.terms.push_back({1.0, "Y_" + path_suffix(key.first, key.second, k + 1)});
        }
        row.terms.push_back(
            {-std::max(big_m, static_cast<double>(entry.size())),
             "yod_" + pair_suffix(key.first, key.second)});
        row.sense = 'L';
        row.rhs = 0.0;
        m.rows.push_back(std::move(row));
    }
    for (const auto& [key, entry] : inst.catalog->entries) {
        MilpRow row;
        row.name = "cover_need_" + pair_suffix(key.first, key.second);
        row.terms.push_back({1.0, "yod_" + pair_suffix(key.first, key.second)});
        for (std::size_t k = 0; k < entry.size(); ++k) {
            row.terms.push_back({-1.0, "Y_" + path_suffix(key.first, key.second, k + 1)});
        }
        row.sense = 'L';
        row.rhs = 0.0;
        m.rows.push_back(std::move(row));
    }

    // Node coverage is the covered share of the node's destination count.
    for (NodeId r : net.nodes()) {
        MilpRow row;
        row.name = "nodecov_" + std::to_string(r);
        row.terms.push_back(
            {static_cast<double>(inst.denominators.at(r)), var_z(r)});
        for (const auto& [key, entry] : inst.catalog->entries) {
            if (key.first != r) continue;
            row.terms.push_back({-1.0, "yod_" + pair_suffix(key.first, key.second)});
        }
        row.sense = 'E';
        row.rhs = 0.0;
        m.rows.push_back(std::move(row));
    }

    {
        MilpRow row;
        row.name = "budget";
        for (NodeId i : inst.candidates) {
            row.terms.push_back({inst.cost_of(i), var_x(i)});
        }
        row.sense = 'L';
        row.rhs = inst.budget;
        m.rows.push_back(std::move(row));
    }

    // Fuel on hand when the trip starts.
    for (const PathRef& p : paths) {
        MilpRow row;
        row.name = "initsof_" + path_suffix(p.r, p.s, p.k1);
        row.terms.push_back({1.0, "B_" + pos_suffix(p.r, p.s, p.k1, 0)});
        row.sense = 'E';
        row.rhs = inst.vehicle.initial_sof;
        m.rows.push_back(std::move(row));
    }

    for (NodeId r : net.nodes()) {
        m.upper_bounds.push_back({var_z(r), 1.0});
    }

    for (NodeId i : inst.candidates) m.binaries.push_back(var_x(i));
    for (const PathRef& p : paths) {
        m.binaries.push_back("Y_" + path_suffix(p.r, p.s, p.k1));
    }
    for (const auto& [key, entry] : inst.catalog->entries) {
        m.binaries.push_back("yod_" + pair_suffix(key.first, key.second));
    }

    return m;
}

std::string write_lp(const MilpModel& m) {
    std::string out;
    out += "Maximize\n";
    write_statement(out, "obj", m.objective, "");
    out += "Subject To\n";
    for (const MilpRow& row : m.rows) {
        const char* cmp = row.sense == 'L' ? "<=" : (row.sense == 'E' ? "=" : ">=");
        write_statement(out, row.name, row.terms,
                        std::string(cmp) + " " + fmt_double(row.rhs));
    }
    out += "Bounds\n";
    for (const auto& [var, bound] : m.upper_bounds) {
        out += " " + var + " <= " + fmt_double(bound) + "\n";
    }
    out += "Binaries\n";
    {
        LineWrapper wrap("");
        for (const std::string& var : m.binaries) wrap.add(var);
        if (!m.binaries.empty()) out += wrap.finish();
    }
    out += "End\n";
    return out;
}

MilpModel read_lp(const std::string& text) {
    enum class Section { None, Objective, Rows, Bounds, Binaries, Done };
    MilpModel m;
    Section section = Section::None;

    // Pending statement being accumulated across wrapped lines.
    std::string pending_name;
    std::vector<std::string> pending_tokens;
    bool have_pending = false;

    auto flush_pending = [&]() {
        if (!have_pending) return;
        Statement st = parse_statement(pending_name, pending_tokens);
        if (section == Section::Objective) {
            if (st.name != "obj") bad_lp("objective must be named obj");
            if (st.sense != 0) bad_lp("objective must not have a right-hand side");
            m.objective = std::move(st.terms);
        } else {
            if (st.sense == 0) bad_lp("constraint " + st.name + " has no comparison");
            m.rows.push_back({st.name, std::move(st.terms), st.sense, st.rhs});
        }
        have_pending = false;
        pending_tokens.clear();
    };

    std::istringstream in(text);
    std::string line;
    bool saw_objective = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == "Maximize") {
            if (section != Section::None) bad_lp("unexpected Maximize");
            section = Section::Objective;
            continue;
        }
        if (line == "Subject To") {
            if (section != Section::Objective) bad_lp("unexpected Subject To");
            flush_pending();
            if (!saw_objective) bad_lp("missing objective");
            section = Section::Rows;
            continue;
        }
        if (line == "Bounds") {
            if (section != Section::Rows) bad_lp("unexpected Bounds");
            flush_pending();
            section = Section::Bounds;
            continue;
        }
        if (line == "Binaries") {
            if (section != Section::Bounds) bad_lp("unexpected Binaries");
            section = Section::Binaries;
            continue;
        }
        if (line == "End") {
            if (section != Section::Binaries) bad_lp("unexpected End");
            section = Section::Done;
            continue;
        }

        std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) {
            if (section == Section::None || section == Section::Done) continue;
            bad_lp("blank line inside a section");
        }
        switch (section) {
            case Section::Objective:
            case Section::Rows: {
                std::size_t start = 0;
                if (!tokens[0].empty() && tokens[0].back() == ':') {
                    flush_pending();
                    pending_name = tokens[0].substr(0, tokens[0].size() - 1);
                    if (pending_name.empty()) bad_lp("empty statement name");
                    have_pending = true;
                    if (section == Section::Objective) saw_objective = true;
                    start = 1;
                } else if (!have_pending) {
                    bad_lp("continuation line without a statement");
                }
                for (std::size_t i = start; i < tokens.size(); ++i) {
                    pending_tokens.push_back(tokens[i]);
                }
                break;
            }
            case Section::Bounds: {
                double bound = 0.0;
                if (tokens.size() != 3 || tokens[1] != "<=" ||
                    !parse_number(tokens[2], bound)) {
                    bad_lp("bad bound line");
                }
                m.upper_bounds.push_back({tokens[0], bound});
                break;
            }
            case Section::Binaries:
                for (const std::string& tok : tokens) m.binaries.push_back(tok);
                break;
            case Section::None:
            case Section::Done:
                bad_lp("content outside sections");
        }
    }
    if (section != Section::Done) bad_lp("missing End");
    return m;
}

void export_milp(const Instance& inst, const std::string& path) {
    const std::string text = write_lp(build_milp(inst));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw Error("failed writing " + path);
}

}  // namespace afslab
