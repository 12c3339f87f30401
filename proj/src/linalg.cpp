#include "flowcurv/linalg.hpp"

namespace flowcurv {

namespace {

void check_square(const PolyMatrix& m) {
    if (m.empty()) throw contract_error("determinant of empty matrix");
    for (const auto& row : m)
        if (row.size() != m.size()) throw contract_error("matrix is not square");
}

Poly det_laplace_dp(const PolyMatrix& m) {
    const int n = static_cast<int>(m.size());
    const ContextPtr& ctx = m[0][0].context();
    // minors[S] = det of rows 0..popcount(S)-1 restricted to column set S
    std::vector<Poly> minors(1u << n);
    minors[0] = Poly::constant(ctx, Rational(1));
    for (int r = 0; r < n; ++r) {
        std::vector<Poly> next(1u << n);
        for (unsigned s = 0; s < (1u << n); ++s) {
            if (__builtin_popcount(s) != r + 1) continue;
            PolyBuilder acc(ctx);
            int pos = 0;
            for (int j = 0; j < n; ++j) {
                if (!(s & (1u << j))) continue;
                const Poly& sub = minors[s & ~(1u << j)];
                if (!sub.is_zero() && !m[static_cast<size_t>(r)][static_cast<size_t>(j)].is_zero()) {
                    Poly prod = m[static_cast<size_t>(r)][static_cast<size_t>(j)] * sub;
                    // cofactor sign for expansion along row r: (-1)^(r + pos)
                    if ((r + pos) % 2 == 0)
                        acc.add(prod);
                    else
                        acc.add_scaled(prod, Rational(-1));
                }
                ++pos;
            }
            next[s] = acc.build();
        }
        minors = std::move(next);
    }
    return minors[(1u << n) - 1];
}

Poly det_bareiss(PolyMatrix m) {
    const int n = static_cast<int>(m.size());
    const ContextPtr& ctx = m[0][0].context();
    Poly prev_pivot = Poly::constant(ctx, Rational(1));
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[static_cast<size_t>(k)][static_cast<size_t>(k)].is_zero()) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (!m[static_cast<size_t>(i)][static_cast<size_t>(k)].is_zero()) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return Poly(ctx); // whole column zero below: det = 0
            std::swap(m[static_cast<size_t>(k)], m[static_cast<size_t>(swap_row)]);
            sign = -sign;
        }
        const Poly& pivot = m[static_cast<size_t>(k)][static_cast<size_t>(k)];
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Poly num = m[static_cast<size_t>(i)][static_cast<size_t>(j)] * pivot -
                           m[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                               m[static_cast<size_t>(k)][static_cast<size_t>(j)];
                auto [q, r] = Poly::divide_exact(num, prev_pivot);
                if (!r.is_zero()) throw math_error("non-exact division in fraction-free elimination");
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] = q;
            }
            m[static_cast<size_t>(i)][static_cast<size_t>(k)] = Poly(ctx);
        }
        prev_pivot = pivot;
    }
    Poly det = m[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)];
    return sign < 0 ? -det : det;
}

} // namespace

Poly determinant(const PolyMatrix& m, DetAlgo algo) {
    check_square(m);
    for (const auto& row : m)
        for (const auto& p : row)
            if (!same_context(p.context(), m[0][0].context()))
                throw contract_error("matrix entries have mixed contexts");
    return algo == DetAlgo::laplace_dp ? det_laplace_dp(m) : det_bareiss(m);
}

Rational rational_determinant(const RationalMatrix& m) {
    const size_t n = m.size();
    if (n == 0) throw contract_error("determinant of empty matrix");
    for (const auto& row : m)
        if (row.size() != n) throw contract_error("matrix is not square");
    if (n == 1) return m[0][0];
    // cofactor expansion along the first row
    Rational det(0);
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        RationalMatrix sub(n - 1, std::vector<Rational>(n - 1));
        for (size_t i = 1; i < n; ++i) {
            size_t cc = 0;
            for (size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                sub[i - 1][cc++] = m[i][c];
            }
        }
        Rational term = m[0][j] * rational_determinant(sub);
        det += (j % 2 == 0) ? term : -term;
    }
    return det;
}

Rational rational_trace(const RationalMatrix& m) {
    Rational t(0);
    for (size_t i = 0; i < m.size(); ++i) t += m[i][i];
    return t;
}

std::vector<Rational> apply(const RationalMatrix& m, const std::vector<Rational>& v) {
    if (m.empty() || m[0].size() != v.size()) throw contract_error("matrix-vector dimension mismatch");
    std::vector<Rational> out(m.size(), Rational(0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

bool trace_identity_oracle(const RationalMatrix& j, const std::vector<std::vector<Rational>>& vectors) {
    const size_t n = j.size();
    if (vectors.size() != n) throw contract_error("need exactly n vectors");
    for (const auto& v : vectors)
        if (v.size() != n) throw contract_error("vector dimension mismatch");

    auto det_of = [&](const std::vector<std::vector<Rational>>& cols) {
        RationalMatrix m(n, std::vector<Rational>(n));
        for (size_t c = 0; c < n; ++c)
            for (size_t r = 0; r < n; ++r) m[r][c] = cols[c][r];
        return rational_determinant(m);
    };

    Rational lhs(0);
    for (size_t i = 0; i < n; ++i) {
        auto cols = vectors;
        cols[i] = apply(j, vectors[i]);
        lhs += det_of(cols);
    }
    Rational rhs = rational_trace(j) * det_of(vectors);
    return lhs == rhs;
}

} // namespace flowcurv
