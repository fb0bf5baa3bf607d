#pragma once
#include <array>
#include <cstdlib>
#include <vector>

#include "common.hpp"

namespace curvembed {

// Literals are signed 1-based variable indices (DIMACS convention).
using Clause = std::array<int, 3>;

struct Formula3CNF {
    int nvars = 0;
    std::vector<Clause> clauses;
};

inline Formula3CNF make_formula(int nvars, std::vector<Clause> clauses) {
    require(nvars >= 0, "negative variable count");
    for (const auto& c : clauses)
        for (int lit : c) {
            require(lit != 0, "zero literal");
            require(std::abs(lit) <= nvars, "literal exceeds variable count");
        }
    return Formula3CNF{nvars, std::move(clauses)};
}

inline int lit_var(int lit) { return std::abs(lit) - 1; }  // 0-based variable
inline bool lit_positive(int lit) { return lit > 0; }

inline bool clause_satisfied(const Clause& c, const std::vector<bool>& assign) {
    for (int lit : c) {
        bool v = assign[lit_var(lit)];
        if (lit_positive(lit) ? v : !v) return true;
    }
    return false;
}

inline bool formula_satisfied(const Formula3CNF& F, const std::vector<bool>& assign) {
    for (const auto& c : F.clauses)
        if (!clause_satisfied(c, assign)) return false;
    return true;
}

}  // namespace curvembed
