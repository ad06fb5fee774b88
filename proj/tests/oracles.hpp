#pragma once
// Independent reference computations used by the unit tests.

#include "fdisk/disk.hpp"

#include <random>

namespace oracle {

using namespace fdisk;

// Sum of local residues, each computed from a Laurent expansion at the point
// with localized coefficients. Works for symbolic or rational points.
inline ACoeff local_residue_sum(const DiskFun& f) {
    const auto& ps = *f.points();
    int n = ps.size();
    ACoeff total;
    for (int i = 0; i < n; ++i) {
        int m = f.den()[i];
        if (m == 0) continue;
        // t = z - a_i; series to order t^(m-1)
        auto shift = [&](const ZPoly& p) {
            ZPoly sh = zpoly::compose(p, ZPoly{ps.value(i), ACoeff(1)});
            sh.resize(std::max<std::size_t>(sh.size(), m));
            sh.resize(m);
            return sh;
        };
        ZPoly series = shift(f.num());
        for (int j = 0; j < n; ++j) {
            if (j == i || f.den()[j] == 0) continue;
            // 1/(t + d)^mj with d = a_i - a_j, via repeated geometric series
            ACoeff d = ps.value(i) - ps.value(j);
            ACoeff dinv = d.is_constant() ? d.invert() : ACoeff::inv_difference(i, j);
            ZPoly geo(m);
            ACoeff c = dinv;
            for (int k = 0; k < m; ++k) {
                geo[k] = c;
                c = -c * dinv;
            }
            for (int r = 0; r < f.den()[j]; ++r) {
                series = zpoly::mul(series, geo);
                series.resize(std::max<std::size_t>(series.size(), m));
                series.resize(m);
            }
        }
        zpoly::trim(series);
        if (static_cast<int>(series.size()) >= m) total += series[m - 1];
    }
    return total;
}

inline ACoeff random_poly_coeff(std::mt19937& rng, int nvars, int maxdeg = 1) {
    std::uniform_int_distribution<int> c(-3, 3);
    ACoeff r(c(rng));
    for (int v = 0; v < nvars; ++v)
        for (int d = 1; d <= maxdeg; ++d) {
            int k = c(rng);
            if (k) r += ACoeff(Poly::var(v).pow(d) * Q(k));
        }
    return r;
}

// Random element with numerator degree <= zdeg and denominators <= maxden.
inline DiskFun random_diskfun(std::mt19937& rng, const PointSetPtr& ps, int zdeg, int maxden, int cdeg = 1) {
    std::uniform_int_distribution<int> dd(0, maxden);
    ZPoly num(zdeg + 1);
    for (auto& c : num) c = random_poly_coeff(rng, ps->nvars(), cdeg);
    std::vector<int> den(ps->size());
    for (auto& d : den) d = dd(rng);
    return DiskFun(ps, num, den);
}

}  // namespace oracle
