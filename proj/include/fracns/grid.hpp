#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace fracns {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Discretization of the periodic box [0, 2pi)^3. All three axes carry the
/// same number of modes; integer wavenumbers run over [-N/2, N/2).
struct GridSpec {
    int n = 16;
    double dealias_fraction = 2.0 / 3.0;

    void validate() const {
        if (n < 8 || n % 2 != 0)
            throw std::invalid_argument("GridSpec: n must be even and >= 8");
        if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
            throw std::invalid_argument("GridSpec: dealias_fraction must lie in (0,1]");
    }

    /// Largest retained |k_i| under the max-norm dealias mask.
    int dealias_cutoff() const {
        return static_cast<int>(std::floor(dealias_fraction * n / 2.0));
    }

    /// Storage index -> signed wavenumber (FFT ordering, Nyquist maps to -n/2).
    int wavenumber(int idx) const { return idx < n / 2 ? idx : idx - n; }

    /// Signed wavenumber -> storage index.
    int index_of(int k) const { return k >= 0 ? k : k + n; }

    std::size_t modes() const { return static_cast<std::size_t>(n) * n * n; }

    std::size_t mode_index(int i, int j, int l) const {
        return (static_cast<std::size_t>(i) * n + j) * n + l;
    }

    bool in_dealias_mask(int kx, int ky, int kz) const {
        const int c = dealias_cutoff();
        return std::abs(kx) <= c && std::abs(ky) <= c && std::abs(kz) <= c;
    }

    bool operator==(const GridSpec& o) const {
        return n == o.n && dealias_fraction == o.dealias_fraction;
    }
};

/// Visit every lattice mode; fn(flat_index, kx, ky, kz). Iteration order is
/// fixed (storage order) so reductions over modes are deterministic.
template <typename Fn>
void for_each_mode(const GridSpec& g, Fn&& fn) {
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i) {
        const int kx = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const int ky = g.wavenumber(j);
            for (int l = 0; l < g.n; ++l, ++idx) {
                fn(idx, kx, ky, g.wavenumber(l));
            }
        }
    }
}

}  // namespace fracns
