#include "acb/search.hpp"

#include "acb/types.hpp"

#include <algorithm>
#include <random>

namespace acb::search {

SearchResult pattern_search(const Objective& f, const std::vector<double>& lo, const std::vector<double>& hi,
                            const PatternSearchOptions& opt, const std::vector<double>& start) {
    const std::size_t n = lo.size();
    if (hi.size() != n || n == 0) throw DomainError("pattern_search: bad bounds");
    for (std::size_t i = 0; i < n; ++i)
        if (!(lo[i] <= hi[i])) throw DomainError("pattern_search: lo > hi");
    if (!start.empty() && start.size() != n) throw DomainError("pattern_search: bad start point");

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SearchResult best;

    for (int r = 0; r < opt.restarts; ++r) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = unit(rng);  // always drawn, keeps the stream independent of `start`
            if (r == 0) x[i] = start.empty() ? 0.5 * (lo[i] + hi[i]) : std::clamp(start[i], lo[i], hi[i]);
            else x[i] = lo[i] + u * (hi[i] - lo[i]);
        }
        int used = 0;
        double fx = f(x);
        ++used;
        ++best.evaluations;
        auto consider = [&](const std::vector<double>& p, double v) {
            if (v < best.value) {
                best.value = v;
                best.x = p;
                best.restart = r;
            }
        };
        consider(x, fx);
        if (best.value <= opt.target) return best;

        double step = opt.initial_step;
        std::vector<double> trial;
        while (used < opt.evaluations_per_restart && step >= opt.min_step) {
            bool improved = false;
            for (std::size_t i = 0; i < n && !improved && used < opt.evaluations_per_restart; ++i) {
                const double h = step * (hi[i] - lo[i]);
                if (h == 0.0) continue;
                for (double dir : {+1.0, -1.0}) {
                    trial = x;
                    trial[i] = std::clamp(x[i] + dir * h, lo[i], hi[i]);
                    if (trial[i] == x[i]) continue;
                    const double v = f(trial);
                    ++used;
                    ++best.evaluations;
                    consider(trial, v);
                    if (best.value <= opt.target) return best;
                    if (v < fx) {
                        x = trial;
                        fx = v;
                        improved = true;
                        break;
                    }
                    if (used >= opt.evaluations_per_restart) break;
                }
            }
            if (!improved) step *= 0.5;
        }
    }
    return best;
}

}  // namespace acb::search
