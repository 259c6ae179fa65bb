#include "torrec/json_io.hpp"

namespace torrec {

std::string rat_string(const Rat& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string int_string(const Int& z) { return z.get_str(); }

Json rat_vec_json(const RatVec& v) {
    Json arr = Json::array();
    for (const auto& q : v) arr.push_back(rat_string(q));
    return arr;
}

Json output_header(const std::string& command, const Json& config, std::uint64_t seed,
                   unsigned precision_bits) {
    Json h;
    h["tool"] = "torrec";
    h["version"] = "0.1.0";
    h["command"] = command;
    h["config"] = config;
    h["seed"] = seed;
    h["precision_bits"] = precision_bits;
    return h;
}

Json to_json(const Spectrum& s) {
    Json arr = Json::array();
    for (const auto& e : s.entries) {
        Json m;
        m["value"] = e.value;
        m["radius"] = e.radius;
        if (e.exact) m["exact"] = rat_string(*e.exact);
        arr.push_back(std::move(m));
    }
    Json j;
    j["moduli"] = std::move(arr);
    j["hypothesis_ok"] = s.hypothesis_ok;
    j["hypothesis_margin"] = s.hypothesis_margin;
    return j;
}

Json to_json(const DimensionResult& r) {
    Json j;
    j["value"] = r.value;
    j["label"] = r.label;
    j["argmin_j"] = r.argmin_j;
    j["per_j"] = r.per_j;
    if (!r.k_sets.empty()) j["k_sets"] = r.k_sets;
    j["alpha_threshold"] = r.alpha_threshold;
    return j;
}

Json to_json(const PeriodicSet& p, bool list_points) {
    Json j;
    j["period"] = p.period;
    j["count"] = int_string(p.cardinality);
    if (list_points) {
        Json pts = Json::array();
        for (const auto& x : p.points) pts.push_back(rat_vec_json(x));
        j["points"] = std::move(pts);
    }
    return j;
}

Json to_json(const BallCountReport& r) {
    Json j;
    j["count"] = int_string(r.count);
    j["product_bound"] = int_string(r.product_bound);
    j["bound_ratio"] = r.bound_ratio;
    j["two_sided_applicable"] = r.two_sided_applicable;
    j["two_sided_ratio"] = r.two_sided_ratio;
    return j;
}

Json to_json(const EllipsoidCountReport& r) {
    Json j;
    j["count"] = int_string(r.count);
    j["model"] = r.model;
    j["ratio"] = r.ratio;
    j["hypothesis_ok"] = r.hypothesis_ok;
    return j;
}

Json to_json(const SemiAxesReport& r) {
    Json j;
    j["degree"] = r.degree;
    j["semi_axes_exact"] = r.exact_axes;
    j["semi_axes_exact_radius"] = r.exact_radius;
    j["semi_axes_model"] = r.model_axes;
    j["ratio"] = r.ratio;
    j["max_deviation"] = r.max_deviation;
    return j;
}

Json to_json(const AxisGrowthFit& r) {
    Json j;
    Json sweep = Json::array();
    for (const auto& rep : r.sweep) sweep.push_back(to_json(rep));
    j["sweep"] = std::move(sweep);
    j["growth_exponent"] = r.exponent;
    return j;
}

Json to_json(const SeparationReport& r) {
    Json j;
    j["degree"] = r.degree;
    j["single"] = r.single;
    j["lower_bound"] = r.lower_bound;
    j["required"] = r.required;
    j["satisfied"] = r.satisfied;
    j["exact"] = r.exact;
    return j;
}

Json to_json(const SeriesReport& r) {
    Json j;
    j["s"] = r.s;
    j["log_terms"] = r.log_terms;
    switch (r.verdict) {
        case SeriesVerdict::Converging: j["verdict"] = "converging"; break;
        case SeriesVerdict::Diverging: j["verdict"] = "diverging"; break;
        default: j["verdict"] = "inconclusive"; break;
    }
    j["tail_ratio_low"] = r.tail_ratio_low;
    j["tail_ratio_high"] = r.tail_ratio_high;
    return j;
}

Json to_json(const BoxCountReport& r) {
    Json j;
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.counts.size(); ++i) {
        Json row;
        row["scale_exponent"] = r.scale_exponents[i];
        row["count"] = int_string(r.counts[i]);
        rows.push_back(std::move(row));
    }
    j["per_scale"] = std::move(rows);
    j["slope"] = r.slope;
    j["monotone"] = r.monotone;
    return j;
}

Json to_json(const LevelSequence& s) {
    Json j;
    j["levels"] = s.levels;
    j["ratios"] = s.ratios;
    j["ratio_threshold"] = s.ratio_threshold;
    return j;
}

Json to_json(const MassTree& t) {
    Json j;
    j["levels"] = to_json(t.seq)["levels"];
    Json levels = Json::array();
    for (std::size_t li = 0; li < t.levels.size(); ++li) {
        Json nodes = Json::array();
        for (const auto& node : t.levels[li]) {
            Json n;
            n["center"] = rat_vec_json(node.center);
            n["mass"] = rat_string(node.mass);
            if (node.parent >= 0) n["parent"] = node.parent;
            nodes.push_back(std::move(n));
        }
        levels.push_back(std::move(nodes));
    }
    j["nodes"] = std::move(levels);
    j["step_scale_ok"] = t.step_scale_ok;
    return j;
}

Json to_json(const MassBoundsReport& r) {
    Json j;
    j["fitted_c1"] = r.fitted_c1;
    j["level1_exact"] = r.level1_exact;
    j["level_ratio_min"] = r.level_ratio_min;
    j["level_ratio_max"] = r.level_ratio_max;
    j["flagged_steps"] = r.flagged_steps;
    j["nodes_fitted"] = r.nodes_fitted;
    j["nodes_excluded"] = r.nodes_excluded;
    return j;
}

Json to_json(const CoverCountReport& r) {
    Json j;
    j["product"] = int_string(r.product);
    j["empirical"] = int_string(r.empirical);
    j["ratio"] = r.ratio;
    return j;
}

Json to_json(const LocalDimensionReport& r) {
    Json j;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json jr;
        jr["x"] = rat_vec_json(row.x);
        jr["r"] = row.r;
        jr["mu"] = row.mu;
        jr["quotient"] = row.quotient;
        rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);
    j["min_quotient"] = r.min_quotient;
    j["seed"] = r.seed;
    return j;
}

Json to_json(const ConjugacyData& cd) {
    Json j;
    Json pt = Json::array();
    for (std::size_t i = 0; i < cd.P_tilde.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < cd.P_tilde.dim(); ++k)
            row.push_back(int_string(cd.P_tilde.at(i, k)));
        pt.push_back(std::move(row));
    }
    j["P_tilde"] = std::move(pt);
    j["beta"] = int_string(cd.beta);
    Json dd = Json::array();
    for (std::size_t i = 0; i < cd.D.dim(); ++i) dd.push_back(int_string(cd.D.at(i, i)));
    j["D"] = std::move(dd);
    j["e_min"] = cd.e_min;
    j["e_max"] = cd.e_max;
    return j;
}

Json to_json(const CommutationReport& r) {
    Json j;
    j["commutation_samples"] = r.samples;
    j["failures"] = r.failures;
    j["seed"] = r.seed;
    return j;
}

Json to_json(const SandwichRow& r) {
    Json j;
    j["r"] = r.r;
    j["exp1_lower"] = r.exp1_lower;
    j["exp1_upper"] = r.exp1_upper;
    j["expd_lower"] = r.expd_lower;
    j["expd_upper"] = r.expd_upper;
    return j;
}

}  // namespace torrec
