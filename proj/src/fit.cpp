#include "acb/landsmeer.hpp"
#include "acb/model.hpp"

#include <cmath>
#include <map>

namespace acb {

FitResult fit_sheath_parameters(const HandModel& model, const std::vector<ExcursionTarget>& targets) {
    FitResult out;
    out.fitted = model.data();

    std::map<std::string, std::vector<const ExcursionTarget*>> by_tendon;
    std::vector<std::string> order;
    for (const auto& t : targets) {
        model.muscle_index(t.tendon);  // throws on unknown ids
        if (!by_tendon.count(t.tendon)) order.push_back(t.tendon);
        by_tendon[t.tendon].push_back(&t);
    }

    for (const auto& id : order) {
        const auto m = model.muscle_index(id);
        const auto& segs = model.segments(m);

        // Excursion is affine in the common d scale: E(s) = a + s·c.
        std::vector<double> a, c, goal;
        for (const auto* t : by_tendon[id]) {
            const double total = landsmeer::path_excursion(model, m, t->posture).excursion;
            double lin = 0.0;
            for (const auto& s : segs) {
                if (s.model != LandsmeerModel::III) continue;
                const double theta = t->posture[s.dof] - model.dof_spec(s.dof).rest;
                lin += s.side * theta * s.d;
            }
            a.push_back(total - lin);
            c.push_back(lin);
            goal.push_back(total < 0.0 ? -t->excursion : t->excursion);
        }
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            num += c[k] * (goal[k] - a[k]);
            den += c[k] * c[k];
        }
        if (den == 0.0) {
            throw ModelError("fit: tendon " + id + " has no sheath crossing flexed in any target posture");
        }
        const double scale = num / den;
        if (!(scale > 0.0)) {
            throw ModelError("fit: tendon " + id + " would need a non-positive sheath distance");
        }

        TendonFit fit;
        fit.tendon = id;
        fit.scale = scale;
        for (const auto& s : segs)
            if (s.model == LandsmeerModel::III) fit.fitted_d.push_back(scale * s.d);
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double predicted = a[k] + scale * c[k];
            const double target = std::abs(goal[k]);
            fit.residuals.push_back(std::abs(predicted) - target);
            fit.relative_residuals.push_back((std::abs(predicted) - target) / target);
        }

        for (auto& t : out.fitted.tendons) {
            if (t.muscle != id) continue;
            for (auto& s : t.segments)
                if (s.model == LandsmeerModel::III) s.d *= scale;
        }
        out.tendons.push_back(std::move(fit));
    }
    return out;
}

std::vector<ExcursionTarget> table3_targets(const HandModel& model) {
    return {
        {"FDP_index",
         model.posture_from_degrees({{"index.MCP.flex", 79.4}, {"index.PIP.flex", 97.5}, {"index.DIP.flex", 74.7}}),
         31.4},
        {"FDS_index", model.posture_from_degrees({{"index.MCP.flex", 84.5}, {"index.PIP.flex", 91.1}}), 23.8},
    };
}

}  // namespace acb
