// Acceptance run: one line per criterion. A criterion passes when every row of
// its experiments passes and the experiments finish inside the time limit.
//
//   acceptance [--only N]

#include "experiments.hpp"

#include <cstdio>
#include <cstring>
#include <iostream>

using namespace berezin;
using namespace berezin::experiments;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::vector<std::pair<std::string, std::map<std::string, std::string>>> runs;  // experiment, overrides
    double limit_seconds;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> c = {
        {1, "reproducing property, 10 functions, r in {2, 2.5, 4, 7.3}, both models, rel 1e-6",
         {{"reproducing", {{"tol", "1e-6"}}}}, 10},
        {2, "Gram and Schur-power positivity on 200 configurations, -min eig <= 1e-10 |M|",
         {{"kernels", {{"configs", "200"}, {"tol", "1e-10"}}}}, 10},
        {3, "M <= 2 over 1e5 triples with sup >= 1.9", {{"m-bound", {{"samples", "100000"}}}}, 5},
        {4, "star product vs composition, associativity and adjoint, rel 1e-5", {{"star-product", {{"tol", "1e-5"}}}},
         60},
        {5, "trace duality on 5 pairs and the Toeplitz pairing, rel 1e-4",
         {{"trace-duality", {{"tol", "1e-4"}, {"pair_tol", "1e-4"}}}}, 120},
        {6, "Berezin transform: unit 1e-6, eigenfunction spread 1e-4, one product reading",
         {{"berezin-transform", {}}}, 60},
        {7, "matrix coefficients rel 1e-6 on 10 elements, formal dimension rel 1e-3",
         {{"representation", {{"tol", "1e-3"}}}}, 120},
        {8, "covolume, kernel invariance, traciality 1e-2, trace-Petersson constant",
         {{"equivariant", {{"traciality_tol", "1e-2"}}}}, 600},
        {9, "theta, m and l identities, Rademacher coboundary, phi_t, psi_t and the chi identity",
         {{"cocycles", {}}}, 1200},
        {10, "semiclassical limit over r in {8, 16, 32}, two bump pairs", {{"semiclassical", {{"r", "8,16,32"}}}}, 600},
    };
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--only N]\n";
            return 2;
        }
    }

    int failures = 0;
    for (auto& c : criteria()) {
        if (only && c.id != only) continue;
        bool pass = true;
        double seconds = 0.0;
        std::vector<std::string> problems;
        for (auto& [name, overrides] : c.runs) {
            const Experiment& e = find_experiment(name);
            Params p = make_params(e);
            for (auto& [k, v] : overrides) p.set(k, v);
            try {
                Report rep = run(e, p);
                seconds += rep.runtime;
                for (auto& row : rep.rows)
                    if (!row.pass)
                        problems.push_back(row.name + ": error " + experiments::detail::fmt(row.error) + " > " +
                                         experiments::detail::fmt(row.tolerance));
                pass = pass && rep.pass();
            } catch (const Error& ex) {
                pass = false;
                problems.push_back(name + ": " + ex.what());
            }
        }
        bool in_time = seconds < c.limit_seconds;
        if (!in_time) problems.push_back("runtime " + experiments::detail::fmt(seconds) + " s over the " +
                                       experiments::detail::fmt(c.limit_seconds) + " s limit");
        pass = pass && in_time;
        if (!pass) ++failures;
        std::printf("criterion %2d: %s  %s (%.1f s / %.0f s)\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(),
                    seconds, c.limit_seconds);
        for (auto& d : problems) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
