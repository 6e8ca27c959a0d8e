#include "fracns/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracns/fft.hpp"

namespace fracns {

namespace {
constexpr double kPlancherel = kTwoPi * kTwoPi * kTwoPi;

double norm_weight(NormConvention conv, double ksq) {
    switch (conv.kind) {
        case NormKind::L2:
            return 1.0;
        case NormKind::HomogeneousHs:
            return std::pow(ksq, conv.order);  // |k|^{2s}; pow(0,0)=1 never hits mean-free data
        case NormKind::InhomogeneousHs:
            return std::pow(1.0 + ksq, conv.order);
    }
    return 1.0;
}
}  // namespace

SpectralField frac_laplacian(const SpectralField& u, double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("frac_laplacian: order must be finite and nonnegative");
    SpectralField out = u;
    for_each_mode(u.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        const double symbol = ksq == 0.0 ? 0.0 : std::pow(ksq, alpha);  // |k|^{2alpha}
        for (int c = 0; c < 3; ++c) out.at(c, idx) *= symbol;
    });
    return out;
}

double sobolev_norm(const SpectralField& u, NormConvention conv) {
    if (conv.kind != NormKind::L2 && !(conv.order >= 0.0))
        throw std::invalid_argument("sobolev_norm: order must be >= 0");
    double sum = 0.0;
    for_each_mode(u.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        const double w = norm_weight(conv, ksq);
        double mag = 0.0;
        for (int c = 0; c < 3; ++c) mag += std::norm(u.at(c, idx));
        sum += w * mag;
    });
    return std::sqrt(kPlancherel * sum);
}

double grad_sobolev_norm_sq(const SpectralField& u, double s) {
    double sum = 0.0;
    for_each_mode(u.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        double mag = 0.0;
        for (int c = 0; c < 3; ++c) mag += std::norm(u.at(c, idx));
        sum += std::pow(1.0 + ksq, s) * ksq * mag;
    });
    return kPlancherel * sum;
}

double difference_hs_sq(const SpectralField& u, const SpectralField& v, double s) {
    if (!(u.grid() == v.grid()))
        throw std::invalid_argument("difference_hs_sq: grid mismatch");
    double sum = 0.0;
    for_each_mode(u.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        double mag = 0.0;
        for (int c = 0; c < 3; ++c) mag += std::norm(u.at(c, idx) - v.at(c, idx));
        sum += std::pow(1.0 + ksq, s) * mag;
    });
    return kPlancherel * sum;
}

double l2_inner_product(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("l2_inner_product: grid mismatch");
    double sum = 0.0;
    const std::size_t total = a.size();
    for (std::size_t i = 0; i < total; ++i)
        sum += std::real(a.data()[i] * std::conj(b.data()[i]));
    return kPlancherel * sum;
}

SpectralField leray_project(const SpectralField& u) {
    SpectralField out = u;
    for_each_mode(u.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        if (ksq == 0.0) return;
        const Complex kdotu =
            double(kx) * out.at(0, idx) + double(ky) * out.at(1, idx) + double(kz) * out.at(2, idx);
        const Complex scale = kdotu / ksq;
        out.at(0, idx) -= double(kx) * scale;
        out.at(1, idx) -= double(ky) * scale;
        out.at(2, idx) -= double(kz) * scale;
    });
    out.set_divergence_free(true);
    return out;
}

SpectralField mollify(const SpectralField& u, double eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("mollify: eps must be >= 0");
    if (eps == 0.0) return u;
    SpectralField out = u;
    for_each_mode(u.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        const double m = std::exp(-0.5 * eps * eps * ksq);
        for (int c = 0; c < 3; ++c) out.at(c, idx) *= m;
    });
    return out;
}

SpectralField dealias(const SpectralField& u) {
    SpectralField out = u;
    for_each_mode(u.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
        if (!u.grid().in_dealias_mask(kx, ky, kz))
            for (int c = 0; c < 3; ++c) out.at(c, idx) = Complex{0.0, 0.0};
    });
    return out;
}

PhysicalVector to_physical(const SpectralField& u) {
    const auto& tf = SpectralTransform::for_size(u.grid().n);
    const std::size_t total = u.grid().modes();
    PhysicalVector out{u.grid(), std::vector<double>(3 * total)};
    std::vector<Complex> buf(total);
    for (int c = 0; c < 3; ++c) {
        tf.to_physical(u.component(c), buf.data());
        double* dst = out.component(c);
        for (std::size_t i = 0; i < total; ++i) dst[i] = buf[i].real();
    }
    return out;
}

SpectralField to_spectral(const PhysicalVector& p, bool divergence_free) {
    const auto& tf = SpectralTransform::for_size(p.grid.n);
    const std::size_t total = p.grid.modes();
    SpectralField out(p.grid, divergence_free);
    std::vector<Complex> buf(total);
    for (int c = 0; c < 3; ++c) {
        const double* src = p.component(c);
        for (std::size_t i = 0; i < total; ++i) buf[i] = Complex{src[i], 0.0};
        tf.to_spectral(buf.data(), out.component(c));
    }
    return out;
}

double max_pointwise_speed(const SpectralField& u) {
    const PhysicalVector p = to_physical(u);
    const std::size_t total = u.grid().modes();
    double best = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        const double vx = p.component(0)[i];
        const double vy = p.component(1)[i];
        const double vz = p.component(2)[i];
        best = std::max(best, vx * vx + vy * vy + vz * vz);
    }
    return std::sqrt(best);
}

double divergence_defect(const SpectralField& u) {
    double worst = 0.0;
    double scale = 0.0;
    for_each_mode(u.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
        const Complex kdotu =
            double(kx) * u.at(0, idx) + double(ky) * u.at(1, idx) + double(kz) * u.at(2, idx);
        worst = std::max(worst, std::abs(kdotu));
        const double kmag = std::sqrt(double(kx) * kx + double(ky) * ky + double(kz) * kz);
        for (int c = 0; c < 3; ++c) scale = std::max(scale, kmag * std::abs(u.at(c, idx)));
    });
    return scale == 0.0 ? worst : worst / scale;
}

double hermitian_defect(const SpectralField& u) {
    const GridSpec& g = u.grid();
    double worst = 0.0;
    double scale = 0.0;
    // -k is taken mod n, which self-pairs the Nyquist planes.
    auto neg_index = [&](int k) { return (g.index_of(k) == 0) ? 0 : g.n - g.index_of(k); };
    for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
        const std::size_t neg = g.mode_index(neg_index(kx), neg_index(ky), neg_index(kz));
        for (int c = 0; c < 3; ++c) {
            worst = std::max(worst, std::abs(u.at(c, neg) - std::conj(u.at(c, idx))));
            scale = std::max(scale, std::abs(u.at(c, idx)));
        }
    });
    return scale == 0.0 ? 0.0 : worst / scale;
}

double tail_energy_fraction(const SpectralField& u, int cutoff) {
    double total = 0.0;
    double shell = 0.0;
    for_each_mode(u.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
        double mag = 0.0;
        for (int c = 0; c < 3; ++c) mag += std::norm(u.at(c, idx));
        total += mag;
        const int kinf = std::max({std::abs(kx), std::abs(ky), std::abs(kz)});
        if (kinf == cutoff) shell += mag;
    });
    return total == 0.0 ? 0.0 : shell / total;
}

}  // namespace fracns
