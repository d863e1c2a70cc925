#pragma once

// Shared helpers for the test suites: toy network builders and independent
// reference implementations used as oracles.

#include "resilsim/network.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

inline resilsim::Networks toy(const std::string& power, const std::string& roads, const std::string& couplings) {
    std::istringstream p(power), r(roads), c(couplings);
    return resilsim::load_networks(p, r, c, "toy");
}

/// Three-intersection road strip A(0,0) - B(100,0) - C(200,0).
inline const char* kStripRoads =
    "node,A,0,0\n"
    "node,B,100,0\n"
    "node,C,200,0\n"
    "link,AB,A,B,100\n"
    "link,BC,B,C,100\n";

/// Plant - line - substation - conductor - pole chain along the strip.
inline const char* kChainPower =
    "component,PL,plant,0,0\n"
    "component,TL1,line,50,0\n"
    "component,S1,substation,100,0\n"
    "component,C1,conductor,150,0\n"
    "component,P1,pole,200,0\n"
    "edge,PL,TL1\n"
    "edge,TL1,S1\n"
    "edge,S1,C1\n"
    "edge,C1,P1\n";

// Direct evaluations of the fragility curves, written out independently of
// the library in long double.
inline long double oracle_tower(long double x) {
    long double v = 2e-7L * std::exp(0.0834L * x);
    return v > 1 ? 1 : v;
}
inline long double oracle_pole(long double x) {
    long double v = 1e-4L * std::exp(0.0421L * x);
    return v > 1 ? 1 : v;
}
inline long double oracle_conductor(long double x) {
    if (x <= 0) return 0;
    long double v = 8e-12L * std::pow(x, 5.1731L);
    return v > 1 ? 1 : v;
}
inline long double oracle_line(long double x, long double crit, long double collapse) {
    if (x < crit) return 0.01L;
    if (x > collapse) return 1.0L;
    return 0.01L + (x - crit) / (collapse - crit) * (1.0L - 0.01L);
}

/// Reachability by repeated relaxation over an adjacency matrix (no queue,
/// no adjacency lists): the transitive closure restricted to conducting nodes.
inline std::vector<bool> oracle_reachable(const std::vector<std::vector<bool>>& adj, const std::vector<bool>& alive,
                                          const std::vector<bool>& sources) {
    const std::size_t n = adj.size();
    std::vector<bool> reach(n, false);
    for (std::size_t i = 0; i < n; ++i) reach[i] = sources[i] && alive[i];
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (reach[i] || !alive[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (adj[i][j] && reach[j]) {
                    reach[i] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    return reach;
}

}  // namespace testsupport
