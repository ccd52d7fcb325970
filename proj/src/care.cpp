#include "ofudiff/care.hpp"

#include "ofudiff/model.hpp"
#include "ofudiff/rng.hpp"

#include <cmath>

namespace ofudiff {

double LyapunovSpec::value(const Vec& z) const { return std::sqrt(z.dot(metric * z)); }

bool is_hurwitz(const Mat& a) {
    if (a.rows() != a.cols() || a.rows() == 0) return false;
    Eigen::EigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) return false;
    return es.eigenvalues().real().maxCoeff() < 0.0;
}

namespace {

double operator_norm(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()[0];
}

// Probe-measured bound on ||Hessian of ||.||_P|| at radius r.  The Hessian is
// homogeneous of degree -1, so the value at radius 1 scales as 1/r.
double measure_hessian_bound(const Mat& p, double radius) {
    const int d = static_cast<int>(p.rows());
    if (d == 1) return 0.0;  // |z| sqrt(P) is flat away from 0
    RngStream rng(12345, Stream::eval);
    double worst = 0.0;
    for (int k = 0; k < 512; ++k) {
        Vec z = rng.gaussian_vec(d);
        z *= radius / z.norm();
        const double v = std::sqrt(z.dot(p * z));
        const Vec pz = p * z;
        Mat h = p / v - (pz * pz.transpose()) / (v * v * v);
        worst = std::max(worst, operator_norm(h));
    }
    return worst;
}

}  // namespace

LyapunovSpec solve_care(const Mat& a_bar) {
    const int d = static_cast<int>(a_bar.rows());
    require(d >= 1 && a_bar.cols() == d, "solve_care: square matrix expected");
    if (!is_hurwitz(a_bar))
        throw CertificateError("solve_care: stability certificate unavailable (matrix not Hurwitz)");

    // vec(A'P + PA) = (I kron A' + A' kron I) vec(P) = vec(-I)
    Mat id = Mat::Identity(d, d);
    Mat sys = Mat::Zero(d * d, d * d);
    const Mat at = a_bar.transpose();
    for (int j = 0; j < d; ++j) sys.block(j * d, j * d, d, d) = at;  // I kron A'
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) sys.block(i * d, j * d, d, d) += at(i, j) * id;  // A' kron I
    Vec rhs = Eigen::Map<const Vec>(Mat(-id).eval().data(), d * d);
    Vec vec_p = sys.colPivHouseholderQr().solve(rhs);
    Mat p = Eigen::Map<const Mat>(vec_p.data(), d, d);
    p = ((p + p.transpose()) / 2.0).eval();

    LyapunovSpec spec;
    spec.metric = p;
    spec.care_residual = operator_norm(at * p + p * a_bar + id);
    if (spec.care_residual > 1e-10)
        throw CertificateError("solve_care: residual exceeds 1e-10");

    Eigen::SelfAdjointEigenSolver<Mat> es(p);
    require(es.info() == Eigen::Success, "solve_care: eigensolver failure");
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    require(lmin > 0.0, "solve_care: P not positive definite");
    spec.ell_v = std::sqrt(lmin);
    spec.L_v = std::sqrt(lmax);
    spec.M_v = std::sqrt(lmax);  // ||Pz|| <= lambda_max ||z||_P / sqrt(lambda_max)
    spec.c_v = 1.0 / (4.0 * lmax);
    spec.hessian_probe_only = d >= 2;
    spec.hessian_probe_radius = 1.0;
    spec.M_v_prime = measure_hessian_bound(p, spec.hessian_probe_radius);
    return spec;
}

std::vector<ContractionProbe> sample_contraction_probes(const ModelSpec& model, std::size_t count,
                                                        std::uint64_t seed,
                                                        const std::vector<double>& eps_grid,
                                                        double state_radius) {
    require(!eps_grid.empty(), "sample_contraction_probes: eps grid empty");
    const FamilyMeta& m = model.meta();
    RngStream rng(seed, Stream::eval);
    std::vector<ContractionProbe> probes;
    probes.reserve(count);
    while (probes.size() < count) {
        ContractionProbe p;
        p.x = state_radius * rng.gaussian_vec(m.d);
        p.x_prime = state_radius * rng.gaussian_vec(m.d);
        if ((p.x - p.x_prime).norm() < 1e-9) continue;  // x != x'
        p.a.resize(m.d_action);
        for (int i = 0; i < m.d_action; ++i)
            p.a[i] = m.action_lo[i] + rng.uniform01() * (m.action_hi[i] - m.action_lo[i]);
        p.eps = eps_grid[static_cast<std::size_t>(rng.uniform01() * eps_grid.size()) % eps_grid.size()];
        probes.push_back(std::move(p));
    }
    return probes;
}

namespace {

template <typename Check>
ContractionReport run_probes(const std::vector<ContractionProbe>& probes, Check&& check) {
    ContractionReport report;
    for (const auto& p : probes) {
        auto [used, lhs, rhs] = check(p);
        if (!used) continue;
        ++report.n_probes;
        const double gap = lhs - rhs;
        report.max_violation = std::max(report.max_violation, gap);
        if (gap > 0.0) {
            ++report.n_violations;
            if (report.violations.size() < 16)
                report.violations.push_back({p.x, p.x_prime, p.a, p.eps, lhs, rhs});
        }
    }
    return report;
}

}  // namespace

ContractionReport verify_contraction(const ModelSpec& model, const LyapunovSpec& lyap,
                                     const std::vector<ContractionProbe>& probes) {
    return run_probes(probes, [&](const ContractionProbe& p) {
        const Vec psi = p.x + p.eps * model.drift_bar(p.x, p.a) -
                        (p.x_prime + p.eps * model.drift_bar(p.x_prime, p.a));
        const double lhs = lyap.value(psi);
        const double rhs = (1.0 - p.eps * lyap.c_v) * lyap.value(p.x - p.x_prime) + 1e-12;
        return std::tuple<bool, double, double>{true, lhs, rhs};
    });
}

ContractionReport verify_care_chain(const ModelSpec& model, const LyapunovSpec& lyap,
                                    const std::vector<ContractionProbe>& probes) {
    const double lmax = lyap.lambda_max();
    return run_probes(probes, [&](const ContractionProbe& p) {
        if (p.eps > 1.0 / (2.0 * lmax))
            return std::tuple<bool, double, double>{false, 0.0, 0.0};
        const Vec psi = p.x + p.eps * model.drift_bar(p.x, p.a) -
                        (p.x_prime + p.eps * model.drift_bar(p.x_prime, p.a));
        const double lhs = lyap.value(psi);
        const double v = lyap.value(p.x - p.x_prime);
        const double rhs2 = (1.0 - p.eps / (2.0 * lmax)) * v * v;
        return std::tuple<bool, double, double>{true, lhs * lhs, rhs2 + 1e-12};
    });
}

}  // namespace ofudiff
