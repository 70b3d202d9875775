#include "etdrk4.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace anagram::oracle {

namespace {

using Cx = std::complex<double>;

struct Fft {
    int n;
    fftw_plan fwd, bwd;
    std::vector<Cx> buf;

    explicit Fft(int n_) : n(n_), buf(n_) {
        auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
        fwd = fftw_plan_dft_1d(n, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    std::vector<Cx> forward(const std::vector<Cx>& in) {
        buf = in;
        fftw_execute(fwd);
        return buf;
    }
    std::vector<Cx> backward(const std::vector<Cx>& in) {
        buf = in;
        fftw_execute(bwd);
        for (auto& v : buf) v /= n;
        return buf;
    }
};

}  // namespace

AllenCahnSolution solve_allen_cahn(int n_modes, double dt, const std::vector<double>& times) {
    const int n = n_modes;
    const double pi = std::numbers::pi;
    const double eps = 1e-4;

    AllenCahnSolution sol;
    sol.x.resize(n);
    for (int j = 0; j < n; ++j) sol.x[j] = -1.0 + 2.0 * j / n;
    sol.times = times;
    sol.u.resize(static_cast<int>(times.size()), n);

    // Wavenumbers in FFT order on a length-2 domain.
    std::vector<double> k(n);
    for (int j = 0; j < n; ++j) k[j] = pi * (j < n / 2 ? j : j - n);

    std::vector<double> lin(n);
    for (int j = 0; j < n; ++j) lin[j] = -eps * k[j] * k[j] + 5.0;

    // ETDRK4 phi-coefficients by the contour-integral mean over a unit circle.
    const int m_pts = 64;
    std::vector<double> e(n), e2(n), q(n), f1(n), f2(n), f3(n);
    for (int j = 0; j < n; ++j) {
        const double hl = dt * lin[j];
        e[j] = std::exp(hl);
        e2[j] = std::exp(hl / 2.0);
        Cx sq = 0, s1 = 0, s2 = 0, s3 = 0;
        for (int m = 0; m < m_pts; ++m) {
            const Cx z = hl + std::exp(Cx(0.0, pi * (m + 0.5) / m_pts * 2.0));
            const Cx ez = std::exp(z);
            sq += (std::exp(z / 2.0) - 1.0) / z;
            s1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / (z * z * z);
            s2 += (2.0 + z + ez * (-2.0 + z)) / (z * z * z);
            s3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / (z * z * z);
        }
        q[j] = dt * (sq / static_cast<double>(m_pts)).real();
        f1[j] = dt * (s1 / static_cast<double>(m_pts)).real();
        f2[j] = dt * (s2 / static_cast<double>(m_pts)).real();
        f3[j] = dt * (s3 / static_cast<double>(m_pts)).real();
    }

    Fft fft(n);
    std::vector<Cx> u0(n);
    for (int j = 0; j < n; ++j)
        u0[j] = sol.x[j] * sol.x[j] * std::cos(pi * sol.x[j]);
    std::vector<Cx> v = fft.forward(u0);

    const auto nonlinear = [&](const std::vector<Cx>& vhat) {
        std::vector<Cx> u = fft.backward(vhat);
        for (auto& val : u) {
            const double ur = val.real();
            val = Cx(-5.0 * ur * ur * ur, 0.0);
        }
        return fft.forward(u);
    };

    const double t_end = times.back();
    const long n_steps = std::lround(t_end / dt);
    if (std::abs(n_steps * dt - t_end) > 1e-12)
        throw std::invalid_argument("solve_allen_cahn: dt must divide the final time");

    std::size_t next_snap = 0;
    const auto maybe_snapshot = [&](long step) {
        const double t = step * dt;
        while (next_snap < times.size() && times[next_snap] <= t + 1e-12) {
            std::vector<Cx> u = fft.backward(v);
            for (int j = 0; j < n; ++j) sol.u(static_cast<int>(next_snap), j) = u[j].real();
            ++next_snap;
        }
    };

    maybe_snapshot(0);
    std::vector<Cx> a(n), b(n), c(n);
    for (long step = 1; step <= n_steps; ++step) {
        const std::vector<Cx> nv = nonlinear(v);
        for (int j = 0; j < n; ++j) a[j] = e2[j] * v[j] + q[j] * nv[j];
        const std::vector<Cx> na = nonlinear(a);
        for (int j = 0; j < n; ++j) b[j] = e2[j] * v[j] + q[j] * na[j];
        const std::vector<Cx> nb = nonlinear(b);
        for (int j = 0; j < n; ++j) c[j] = e2[j] * a[j] + q[j] * (2.0 * nb[j] - nv[j]);
        const std::vector<Cx> nc = nonlinear(c);
        for (int j = 0; j < n; ++j)
            v[j] = e[j] * v[j] + nv[j] * f1[j] + 2.0 * (na[j] + nb[j]) * f2[j] + nc[j] * f3[j];
        maybe_snapshot(step);
    }
    return sol;
}

}  // namespace anagram::oracle
