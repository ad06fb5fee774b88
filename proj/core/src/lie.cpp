#include "fdisk/lie.hpp"

#include <map>
#include <mutex>

namespace fdisk {

namespace tables {
extern const char* const sl2_json;
extern const char* const sl3_json;
}  // namespace tables

QMatrix mat_mul(const QMatrix& a, const QMatrix& b) {
    std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
    QMatrix r(n, std::vector<Q>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

QMatrix mat_inverse(const QMatrix& a) {
    std::size_t n = a.size();
    QMatrix w(n, std::vector<Q>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w[i][j] = a[i][j];
        w[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && w[p][c] == 0) ++p;
        if (p == n) throw LieError("singular matrix");
        std::swap(w[c], w[p]);
        Q inv = 1 / w[c][c];
        for (auto& x : w[c]) x *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || w[r][c] == 0) continue;
            Q f = w[r][c];
            for (std::size_t j = 0; j < 2 * n; ++j) w[r][j] -= f * w[c][j];
        }
    }
    QMatrix r(n, std::vector<Q>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i][j] = w[i][n + j];
    return r;
}

int mat_rank(QMatrix a) {
    int rank = 0;
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
        std::size_t p = rank;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[rank], a[p]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == static_cast<std::size_t>(rank) || a[r][c] == 0) continue;
            Q f = a[r][c] / a[rank][c];
            for (std::size_t j = c; j < cols; ++j) a[r][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

namespace {

Q parse_q(const nlohmann::json& j) {
    if (j.is_number_integer()) return Q(j.get<long>());
    return q_from_string(j.get<std::string>());
}

QMatrix commutator(const QMatrix& a, const QMatrix& b) {
    QMatrix ab = mat_mul(a, b), ba = mat_mul(b, a);
    for (std::size_t i = 0; i < ab.size(); ++i)
        for (std::size_t j = 0; j < ab.size(); ++j) ab[i][j] -= ba[i][j];
    return ab;
}

Q trace(const QMatrix& m) {
    Q t;
    for (std::size_t i = 0; i < m.size(); ++i) t += m[i][i];
    return t;
}

}  // namespace

const LieData& LieData::get(const std::string& name) {
    static std::mutex mu;
    static std::map<std::string, LieData> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    const char* src = nullptr;
    if (name == "sl2") src = tables::sl2_json;
    if (name == "sl3") src = tables::sl3_json;
    if (!src) throw LieError("no shipped table for Lie algebra '" + name + "' (available: sl2, sl3)");
    return cache.emplace(name, from_json(nlohmann::json::parse(src))).first->second;
}

std::vector<std::string> LieData::shipped() { return {"sl2", "sl3"}; }

int LieData::index(const std::string& label) const {
    for (int a = 0; a < dim(); ++a)
        if (labels_[a] == label) return a;
    throw LieError("unknown generator '" + label + "' in " + name_);
}

LieData LieData::from_json(const nlohmann::json& j) {
    LieData d;
    d.source_ = j;
    d.name_ = j.at("name").get<std::string>();
    d.dual_name_ = j.value("langlands_dual", d.name_);
    d.rank_ = j.at("rank").get<int>();
    d.hv_ = j.at("dual_coxeter").get<int>();
    d.labels_ = j.at("basis").get<std::vector<std::string>>();
    int n = d.dim();
    auto vec = [&](const nlohmann::json& o) {
        GVec v(n);
        for (auto it = o.begin(); it != o.end(); ++it) v[d.index(it.key())] = parse_q(it.value());
        return v;
    };
    d.table_.assign(n, std::vector<std::vector<std::pair<int, Q>>>(n));
    for (const auto& b : j.at("brackets")) {
        int x = d.index(b.at(0).get<std::string>()), y = d.index(b.at(1).get<std::string>());
        GVec v = vec(b.at(2));
        for (int c = 0; c < n; ++c)
            if (v[c] != 0) {
                d.table_[x][y].emplace_back(c, v[c]);
                d.table_[y][x].emplace_back(c, -v[c]);
            }
    }
    auto sym = [&](const nlohmann::json& entries) {
        QMatrix m(n, std::vector<Q>(n));
        for (const auto& e : entries) {
            int x = d.index(e.at(0).get<std::string>()), y = d.index(e.at(1).get<std::string>());
            m[x][y] = m[y][x] = parse_q(e.at(2));
        }
        return m;
    };
    d.kappa0_ = sym(j.at("form"));
    d.killing_ = sym(j.at("killing"));
    d.kappa0_inv_ = mat_inverse(d.kappa0_);
    const auto& mats = j.at("matrices");
    for (int a = 0; a < n; ++a) {
        QMatrix m;
        for (const auto& row : mats.at(d.labels_[a])) {
            std::vector<Q> r;
            for (const auto& x : row) r.push_back(parse_q(x));
            m.push_back(r);
        }
        d.matrices_.push_back(m);
    }
    d.msize_ = static_cast<int>(d.matrices_.at(0).size());
    for (const auto& s : j.at("simple").at("e")) d.simple_e_.push_back(d.index(s.get<std::string>()));
    for (const auto& s : j.at("simple").at("f")) d.simple_f_.push_back(d.index(s.get<std::string>()));
    for (const auto& s : j.at("simple").at("h")) d.simple_h_.push_back(d.index(s.get<std::string>()));
    d.p_minus_ = vec(j.at("triple").at("p_minus"));
    d.two_rho_ = vec(j.at("triple").at("two_rho"));
    d.p_plus_ = vec(j.at("triple").at("p_plus"));
    for (const auto& v : j.at("vcan")) {
        d.vcan_.push_back(vec(v.at("vector")));
        d.vcan_deg_.push_back(v.at("degree").get<int>());
    }
    d.validate();
    return d;
}

GVec LieData::basis_vector(int a) const {
    GVec v(dim());
    v[a] = 1;
    return v;
}

GVec LieData::bracket(const GVec& x, const GVec& y) const {
    GVec r(dim());
    for (int a = 0; a < dim(); ++a) {
        if (x[a] == 0) continue;
        for (int b = 0; b < dim(); ++b) {
            if (y[b] == 0) continue;
            Q c = x[a] * y[b];
            for (const auto& [m, s] : table_[a][b]) r[m] += c * s;
        }
    }
    return r;
}

Q LieData::form(const GVec& x, const GVec& y) const {
    Q r;
    for (int a = 0; a < dim(); ++a)
        for (int b = 0; b < dim(); ++b)
            if (x[a] != 0 && y[b] != 0) r += x[a] * y[b] * kappa0_[a][b];
    return r;
}

QMatrix LieData::to_matrix(const GVec& x) const {
    QMatrix m(msize_, std::vector<Q>(msize_));
    for (int a = 0; a < dim(); ++a) {
        if (x[a] == 0) continue;
        for (int i = 0; i < msize_; ++i)
            for (int k = 0; k < msize_; ++k) m[i][k] += x[a] * matrices_[a][i][k];
    }
    return m;
}

GVec LieData::from_matrix(const QMatrix& m) const {
    GVec t(dim());
    for (int b = 0; b < dim(); ++b) t[b] = trace(mat_mul(m, matrices_[b]));
    GVec c(dim());
    for (int a = 0; a < dim(); ++a)
        for (int b = 0; b < dim(); ++b) c[a] += kappa0_inv_[a][b] * t[b];
    if (to_matrix(c) != m) throw LieError("matrix is not in the span of " + name_);
    return c;
}

void LieData::validate() {
    int n = dim();
    auto fail = [&](const std::string& what) { throw LieError(name_ + " table: " + what); };
    if (static_cast<int>(matrices_.size()) != n) fail("matrix count mismatch");
    for (int a = 0; a < n; ++a) {
        if (trace(matrices_[a]) != 0) fail("matrix of " + labels_[a] + " is not traceless");
        for (int b = 0; b < n; ++b) {
            if (trace(mat_mul(matrices_[a], matrices_[b])) != kappa0_[a][b]) fail("form is not the trace form");
            if (!table_[a][a].empty() && a == b) fail("bracket is not alternating");
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (to_matrix(bracket(basis_vector(a), basis_vector(b))) != commutator(matrices_[a], matrices_[b]))
                fail("structure constants disagree with matrices at [" + labels_[a] + ", " + labels_[b] + "]");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                GVec x = basis_vector(a), y = basis_vector(b), z = basis_vector(c);
                GVec s = bracket(x, bracket(y, z)), t = bracket(y, bracket(z, x)), u = bracket(z, bracket(x, y));
                for (int m = 0; m < n; ++m)
                    if (s[m] + t[m] + u[m] != 0) fail("Jacobi identity fails");
                if (form(bracket(x, y), z) + form(y, bracket(x, z)) != 0) fail("form is not invariant");
            }
    // Killing form recomputed as trace(ad x ad y)
    std::vector<QMatrix> ad(n, QMatrix(n, std::vector<Q>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (const auto& [m, s] : table_[a][b]) ad[a][m][b] = s;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Q k = trace(mat_mul(ad[a], ad[b]));
            if (k != killing_[a][b]) fail("stored Killing form disagrees with trace(ad ad)");
            if (k != Q(2 * hv_) * kappa0_[a][b]) fail("Killing form is not 2 h^vee times the normalized form");
        }
    // long roots have square length 2: the simple coroots h_i satisfy form(h_i, h_i) = 2
    for (int h : simple_h_)
        if (kappa0_[h][h] != 2) fail("normalization of the invariant form");
    // principal triple
    auto scaled = [](const GVec& v, const Q& c) {
        GVec r = v;
        for (auto& x : r) x *= c;
        return r;
    };
    if (bracket(two_rho_, p_plus_) != scaled(p_plus_, 2)) fail("[2rho, p_1] != 2 p_1");
    if (bracket(two_rho_, p_minus_) != scaled(p_minus_, -2)) fail("[2rho, p_-1] != -2 p_-1");
    if (bracket(p_plus_, p_minus_) != two_rho_) fail("[p_1, p_-1] != 2rho");
    GVec pm(n);
    for (int f : simple_f_) pm[f] += 1;
    if (pm != p_minus_) fail("p_-1 is not the sum of the simple f_i");
    degree_.assign(n, 0);
    for (int a = 0; a < n; ++a) {
        GVec r = bracket(two_rho_, basis_vector(a));
        Q ev = r[a];
        if (r != scaled(basis_vector(a), ev)) fail("basis is not graded by rho");
        Q half = ev / 2;
        if (half.get_den() != 1) fail("odd principal degree");
        degree_[a] = static_cast<int>(half.get_num().get_si());
    }
    if (static_cast<int>(vcan_.size()) != rank_) fail("V^can must have dimension equal to the rank");
    for (std::size_t i = 0; i < vcan_.size(); ++i) {
        if (bracket(p_plus_, vcan_[i]) != GVec(n)) fail("V^can vector does not commute with p_1");
        if (bracket(two_rho_, vcan_[i]) != scaled(vcan_[i], 2 * vcan_deg_[i])) fail("V^can degree mismatch");
    }
    // ad(p_-1) injective on the positive part
    QMatrix cols;
    for (int a = 0; a < n; ++a)
        if (degree_[a] > 0) cols.push_back(bracket(p_minus_, basis_vector(a)));
    if (mat_rank(cols) != static_cast<int>(cols.size())) fail("ad(p_-1) is not injective on n_+");
}

nlohmann::json LieData::to_json() const { return source_; }

}  // namespace fdisk
