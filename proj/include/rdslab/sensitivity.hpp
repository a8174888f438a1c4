#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rdslab/bootstrap.hpp"
#include "rdslab/sampler.hpp"

namespace rdslab {

// The practitioner workflow when indegrees are unobserved: evaluate the
// m-parameterized estimator over a plausible range of the attractivity
// ratio, with the analytic slope showing how hard the estimate reacts to
// errors in m (or, equivalently, to degree reporting error).
struct SweepPoint {
    double m = 0;
    double estimate = 0;     // vh_m estimate
    double lower = 0, upper = 0;
    bool has_ci = false;
    double derivative = 0;   // -(n_A/n_B) / ((n_A/n_B) + m)^2
    double sh_estimate = 0;  // sh_m value when requested
    bool has_sh = false;
};

struct SensitivityCurve {
    std::vector<SweepPoint> points;       // ordered by m, strictly decreasing estimates
    double activity_ratio = 0;            // sample harmonic outdegree ratio w-hat
    double derivative_at_activity = 0;    // slope evaluated at m = w-hat
};

double vh_m_derivative(const RdsSample& s, double m);

/// Evaluates vh_m on an inclusive uniform grid over [m_min, m_max]
/// (endpoints exact), optionally attaching bootstrap intervals per grid
/// point and the sh_m value for comparison.
SensitivityCurve sensitivity_sweep(const RdsSample& s, double m_min, double m_max,
                                   std::uint32_t steps,
                                   const std::optional<BootstrapConfig>& bootstrap = {},
                                   bool include_sh = false);

/// CSV columns: m,estimate,lo,hi,derivative (lo/hi empty without bootstrap).
void write_sweep_csv(const SensitivityCurve& curve, std::ostream& out);
void write_sweep_json(const SensitivityCurve& curve, std::ostream& out);

}  // namespace rdslab
