#ifndef FLOWCURV_MONOMIAL_HPP
#define FLOWCURV_MONOMIAL_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>

#include "flowcurv/context.hpp"

namespace flowcurv {

/// Exponent vector with one slot per context variable. Fixed storage,
/// exponents capped at 255 (far above anything the flow jets reach).
class Monomial {
  public:
    Monomial() : n_(0), deg_(0) { exps_.fill(0); }
    explicit Monomial(int nvars) : n_(static_cast<uint8_t>(nvars)), deg_(0) {
        if (nvars < 0 || nvars > VarContext::kMaxVars) throw contract_error("bad variable count");
        exps_.fill(0);
    }

    int nvars() const { return n_; }
    int degree() const { return deg_; }
    uint8_t exp(int i) const { return exps_[static_cast<size_t>(i)]; }

    void set_exp(int i, int e) {
        if (e < 0 || e > 255) throw contract_error("exponent out of range");
        deg_ = static_cast<uint16_t>(deg_ - exps_[static_cast<size_t>(i)] + e);
        exps_[static_cast<size_t>(i)] = static_cast<uint8_t>(e);
    }

    bool is_constant() const { return deg_ == 0; }

    static Monomial one(int nvars) { return Monomial(nvars); }
    static Monomial var(int nvars, int index, int e = 1) {
        Monomial m(nvars);
        m.set_exp(index, e);
        return m;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r(n_);
        for (int i = 0; i < n_; ++i) {
            int e = exps_[static_cast<size_t>(i)] + o.exps_[static_cast<size_t>(i)];
            if (e > 255) throw contract_error("exponent overflow");
            r.exps_[static_cast<size_t>(i)] = static_cast<uint8_t>(e);
        }
        r.deg_ = static_cast<uint16_t>(deg_ + o.deg_);
        return r;
    }

    bool divides(const Monomial& o) const {
        for (int i = 0; i < n_; ++i)
            if (exps_[static_cast<size_t>(i)] > o.exps_[static_cast<size_t>(i)]) return false;
        return true;
    }

    /// Quotient this / o; caller guarantees o.divides(*this).
    Monomial divide_by(const Monomial& o) const {
        Monomial r(n_);
        for (int i = 0; i < n_; ++i)
            r.exps_[static_cast<size_t>(i)] =
                static_cast<uint8_t>(exps_[static_cast<size_t>(i)] - o.exps_[static_cast<size_t>(i)]);
        r.deg_ = static_cast<uint16_t>(deg_ - o.deg_);
        return r;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.n_ == b.n_ && a.deg_ == b.deg_ && a.exps_ == b.exps_;
    }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

    /// Graded reverse lexicographic order. Higher total degree wins;
    /// on ties, the smaller exponent in the last differing variable wins.
    static int cmp(const Monomial& a, const Monomial& b) {
        if (a.deg_ != b.deg_) return a.deg_ < b.deg_ ? -1 : 1;
        for (int i = a.n_ - 1; i >= 0; --i) {
            uint8_t ea = a.exps_[static_cast<size_t>(i)];
            uint8_t eb = b.exps_[static_cast<size_t>(i)];
            if (ea != eb) return ea > eb ? -1 : 1;
        }
        return 0;
    }

    size_t hash() const {
        uint64_t h = 1469598103934665603ull;
        auto mix = [&h](uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        uint64_t lo, hi;
        std::memcpy(&lo, exps_.data(), 8);
        std::memcpy(&hi, exps_.data() + 8, 8);
        mix(lo);
        mix(hi);
        mix(static_cast<uint64_t>(deg_) << 8 | n_);
        return static_cast<size_t>(h);
    }

  private:
    std::array<uint8_t, VarContext::kMaxVars> exps_;
    uint8_t n_;
    uint16_t deg_;
};

struct GrevlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::cmp(a, b) < 0; }
};
struct GrevlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::cmp(a, b) > 0; }
};
struct MonomialHash {
    size_t operator()(const Monomial& m) const { return m.hash(); }
};

} // namespace flowcurv

#endif
