#pragma once

#include "ofudiff/common.hpp"

#include <cstdint>
#include <vector>

namespace ofudiff {

class ModelSpec;

// Norm-family Lyapunov certificate V(z) = sqrt(z' P z) with its measured
// constants.  For d >= 2 the Hessian of V blows up near 0, so M_v_prime is a
// probe-measured bound at `hessian_probe_radius`, not a global constant;
// `hessian_probe_only` flags that.
struct LyapunovSpec {
    Mat metric;           // P, positive definite
    double ell_v = 0.0;   // sqrt(lambda_min(P))
    double L_v = 0.0;     // sqrt(lambda_max(P))
    double M_v = 0.0;     // gradient bound, sqrt(lambda_max(P)) for the norm family
    double M_v_prime = 0.0;
    double c_v = 0.0;     // contraction rate
    bool hessian_probe_only = false;
    double hessian_probe_radius = 1.0;
    double care_residual = 0.0;  // ||A'P + PA + I||_op when built from the CARE

    double value(const Vec& z) const;
    double lambda_max() const { return L_v * L_v; }
};

bool is_hurwitz(const Mat& a);

// Solve A' P + P A = -I for the continuous-time Lyapunov certificate of a
// Hurwitz A, and derive the norm-equivalence and contraction constants.
// Throws CertificateError when A is not Hurwitz or the residual exceeds 1e-10.
LyapunovSpec solve_care(const Mat& a_bar);

struct ContractionProbe {
    Vec x, x_prime, a;
    double eps;
};

struct ContractionReport {
    std::size_t n_probes = 0;
    std::size_t n_violations = 0;
    double max_violation = 0.0;  // worst lhs - rhs over probes
    struct Case {
        Vec x, x_prime, a;
        double eps, lhs, rhs;
    };
    std::vector<Case> violations;  // first few only
    bool all_pass() const { return n_violations == 0; }
};

// Probe generator: states within `state_radius`, actions inside the family's
// action box, eps drawn from `eps_grid`.
std::vector<ContractionProbe> sample_contraction_probes(const ModelSpec& model,
                                                        std::size_t count,
                                                        std::uint64_t seed,
                                                        const std::vector<double>& eps_grid,
                                                        double state_radius = 5.0);

// Drift contraction check V(x + eps*mu(x,a) - x' - eps*mu(x',a)) <= (1 - eps*c_v) V(x - x')
// with additive tolerance 1e-12.  An all-pass report certifies the model at
// probe resolution only.
ContractionReport verify_contraction(const ModelSpec& model, const LyapunovSpec& lyap,
                                     const std::vector<ContractionProbe>& probes);

// Squared-form chain for CARE-built certificates:
// V(psi)^2 <= (1 - eps/(2*lambda_max(P))) V(x - x')^2, valid for eps <= 1/(2*lambda_max(P)).
// Probes with larger eps are skipped.
ContractionReport verify_care_chain(const ModelSpec& model, const LyapunovSpec& lyap,
                                    const std::vector<ContractionProbe>& probes);

}  // namespace ofudiff
