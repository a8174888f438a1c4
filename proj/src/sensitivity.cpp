#include "rdslab/sensitivity.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "rdslab/estimators.hpp"
#include "rdslab/rng.hpp"

#include "json.hpp"

namespace rdslab {

double vh_m_derivative(const RdsSample& s, double m) {
    if (m <= 0) throw std::invalid_argument("vh_m derivative: m must be positive");
    const auto n_a = s.count(Trait::A);
    const auto n_b = static_cast<std::uint32_t>(s.size()) - n_a;
    if (n_b == 0) throw std::domain_error("vh_m derivative: group B is empty");
    const double r = static_cast<double>(n_a) / n_b;
    return -r / ((r + m) * (r + m));
}

SensitivityCurve sensitivity_sweep(const RdsSample& s, double m_min, double m_max,
                                   std::uint32_t steps, const std::optional<BootstrapConfig>& bootstrap,
                                   bool include_sh) {
    if (!(m_min > 0) || !(m_min < m_max))
        throw std::invalid_argument("sensitivity sweep: need 0 < m_min < m_max");
    if (steps < 2) throw std::invalid_argument("sensitivity sweep: need at least 2 grid points");

    SensitivityCurve curve;
    const GroupDegreeSummary d = sample_group_counts_and_degrees(s);
    curve.activity_ratio = d.harmonic_out_a / d.harmonic_out_b;
    curve.derivative_at_activity = vh_m_derivative(s, curve.activity_ratio);

    const double step = (m_max - m_min) / (steps - 1);
    for (std::uint32_t k = 0; k < steps; ++k) {
        SweepPoint p;
        p.m = k + 1 == steps ? m_max : m_min + k * step;
        p.estimate = vh_m(s, p.m).estimate;
        p.derivative = vh_m_derivative(s, p.m);
        if (bootstrap) {
            BootstrapConfig bc = *bootstrap;
            bc.estimator = BootstrapConfig::Estimator::VhM;
            bc.m = p.m;
            bc.rng_seed = Rng::mix(bootstrap->rng_seed, k);
            const BootstrapResult r = bootstrap_ci(s, bc);
            p.lower = r.intervals.front().lower;
            p.upper = r.intervals.front().upper;
            p.has_ci = true;
        }
        if (include_sh) {
            p.sh_estimate = sh_m(s, p.m).estimate;
            p.has_sh = true;
        }
        curve.points.push_back(p);
    }
    return curve;
}

namespace {

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_sweep_csv(const SensitivityCurve& curve, std::ostream& out) {
    out << "m,estimate,lo,hi,derivative\n";
    for (const auto& p : curve.points) {
        out << fmt6(p.m) << ',' << fmt6(p.estimate) << ',';
        if (p.has_ci) out << fmt6(p.lower) << ',' << fmt6(p.upper);
        else out << ',';
        out << ',' << fmt6(p.derivative) << '\n';
    }
}

void write_sweep_json(const SensitivityCurve& curve, std::ostream& out) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : curve.points) {
        nlohmann::json jp = {{"m", p.m}, {"estimate", p.estimate}, {"derivative", p.derivative}};
        if (p.has_ci) {
            jp["lo"] = p.lower;
            jp["hi"] = p.upper;
        }
        if (p.has_sh) jp["sh_estimate"] = p.sh_estimate;
        points.push_back(std::move(jp));
    }
    const nlohmann::json doc = {{"activity_ratio", curve.activity_ratio},
                                {"derivative_at_activity", curve.derivative_at_activity},
                                {"points", points}};
    out << doc.dump(2) << '\n';
}

}  // namespace rdslab
