#include "flowcurv/poly.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace flowcurv {

namespace {

void sort_and_squeeze(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return Monomial::cmp(a.mono, b.mono) > 0; });
    size_t out = 0;
    for (size_t i = 0; i < terms.size();) {
        size_t j = i + 1;
        Rational c = terms[i].coeff;
        while (j < terms.size() && terms[j].mono == terms[i].mono) {
            c += terms[j].coeff;
            ++j;
        }
        if (!c.is_zero()) {
            terms[out].mono = terms[i].mono;
            terms[out].coeff = c;
            ++out;
        }
        i = j;
    }
    terms.resize(out);
}

} // namespace

Poly Poly::constant(ContextPtr ctx, const Rational& c) {
    Poly p(std::move(ctx));
    if (!c.is_zero()) p.terms_.push_back({Monomial::one(p.nvars()), c});
    return p;
}

Poly Poly::variable(const ContextPtr& ctx, const std::string& name) {
    int idx = ctx->index_of(name);
    if (idx < 0) throw contract_error("unknown variable '" + name + "'");
    return variable(ctx, idx);
}

Poly Poly::variable(ContextPtr ctx, int index, int power) {
    Poly p(ctx);
    if (index < 0 || index >= p.nvars()) throw contract_error("variable index out of range");
    if (power == 0) return constant(std::move(ctx), Rational(1));
    p.terms_.push_back({Monomial::var(p.nvars(), index, power), Rational(1)});
    return p;
}

Poly Poly::from_terms(ContextPtr ctx, std::vector<Term> terms) {
    Poly p(std::move(ctx));
    for (const Term& t : terms)
        if (t.mono.nvars() != p.nvars()) throw contract_error("monomial length does not match context");
    sort_and_squeeze(terms);
    p.terms_ = std::move(terms);
    return p;
}

const Term& Poly::leading_term() const {
    if (terms_.empty()) throw contract_error("zero polynomial has no leading term");
    return terms_.front();
}

std::optional<int> Poly::degree_in(int var) const {
    if (terms_.empty()) return std::nullopt;
    if (var < 0 || var >= nvars()) throw contract_error("variable index out of range");
    int d = 0;
    for (const Term& t : terms_) d = std::max(d, static_cast<int>(t.mono.exp(var)));
    return d;
}

std::optional<int> Poly::degree_in(const std::string& var) const {
    int idx = ctx_ ? ctx_->index_of(var) : -1;
    if (idx < 0) throw contract_error("unknown variable '" + var + "'");
    return degree_in(idx);
}

std::optional<int> Poly::total_degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = 0;
    for (const Term& t : terms_) d = std::max(d, t.mono.degree());
    return d;
}

int Poly::content_power(int var) const {
    if (terms_.empty()) return 0;
    int k = 255;
    for (const Term& t : terms_) k = std::min(k, static_cast<int>(t.mono.exp(var)));
    return k;
}

Poly Poly::divided_by_var_power(int var, int k) const {
    if (k == 0) return *this;
    Poly r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) {
        if (t.mono.exp(var) < k) throw contract_error("variable power does not divide polynomial");
        Monomial m = t.mono;
        m.set_exp(var, t.mono.exp(var) - k);
        r.terms_.push_back({m, t.coeff});
    }
    // dividing every term by the same monomial preserves grevlex order
    return r;
}

void Poly::check_same_context(const Poly& o) const {
    if (!same_context(ctx_, o.ctx_)) throw contract_error("polynomial variable contexts differ");
}

Poly Poly::operator-() const {
    Poly r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) r.terms_.push_back({t.mono, -t.coeff});
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    check_same_context(o);
    Poly r(ctx_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        int c = Monomial::cmp(terms_[i].mono, o.terms_[j].mono);
        if (c > 0) {
            r.terms_.push_back(terms_[i++]);
        } else if (c < 0) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            Rational s = terms_[i].coeff + o.terms_[j].coeff;
            if (!s.is_zero()) r.terms_.push_back({terms_[i].mono, s});
            ++i, ++j;
        }
    }
    for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
    for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    check_same_context(o);
    if (is_zero() || o.is_zero()) return Poly(ctx_);
    PolyBuilder b(ctx_);
    b.add_product(*this, o);
    return b.build();
}

Poly Poly::scaled(const Rational& c) const {
    if (c.is_zero()) return Poly(ctx_);
    Poly r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) r.terms_.push_back({t.mono, t.coeff * c});
    return r;
}

Poly Poly::mul_term(const Monomial& m, const Rational& c) const {
    if (c.is_zero()) return Poly(ctx_);
    Poly r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
    // multiplying every term by one monomial preserves grevlex order
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly r = constant(ctx_, Rational(1));
    Poly base = *this;
    while (e) {
        if (e & 1u) r = r * base;
        if (e >>= 1u) base = base * base;
    }
    return r;
}

bool operator==(const Poly& a, const Poly& b) {
    if (!same_context(a.ctx_, b.ctx_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
}

Poly Poly::derivative(int var) const {
    if (var < 0 || var >= nvars()) throw contract_error("variable index out of range");
    Poly r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) {
        int e = t.mono.exp(var);
        if (e == 0) continue;
        Monomial m = t.mono;
        m.set_exp(var, e - 1);
        r.terms_.push_back({m, t.coeff * Rational(e)});
    }
    // exponent drop in a single variable can reorder terms
    sort_and_squeeze(r.terms_);
    return r;
}

Poly Poly::derivative(const std::string& var) const {
    int idx = ctx_ ? ctx_->index_of(var) : -1;
    if (idx < 0) throw contract_error("unknown variable '" + var + "'");
    return derivative(idx);
}

Poly Poly::substitute(const std::map<std::string, SubstValue>& bindings) const {
    // resolve names and validate up front
    std::vector<int> bound_idx;
    std::vector<const SubstValue*> bound_val;
    for (const auto& [name, val] : bindings) {
        int idx = ctx_ ? ctx_->index_of(name) : -1;
        if (idx < 0) throw contract_error("unknown variable '" + name + "' in substitution");
        if (const Poly* p = std::get_if<Poly>(&val)) {
            if (!same_context(p->context(), ctx_))
                throw contract_error("substitution polynomial context differs");
        }
        bound_idx.push_back(idx);
        bound_val.push_back(&val);
    }
    if (bound_idx.empty()) return *this;

    // power cache for polynomial replacement values
    std::map<int, std::vector<Poly>> poly_powers;

    PolyBuilder out(ctx_);
    for (const Term& t : terms_) {
        Rational coeff = t.coeff;
        Monomial rest = t.mono;
        std::vector<std::pair<int, int>> poly_parts; // (binding slot, exponent)
        for (size_t k = 0; k < bound_idx.size(); ++k) {
            int idx = bound_idx[k];
            int e = t.mono.exp(idx);
            if (e == 0) continue;
            rest.set_exp(idx, 0);
            if (const Rational* rv = std::get_if<Rational>(bound_val[k])) {
                coeff *= rv->pow(static_cast<unsigned>(e));
            } else {
                poly_parts.emplace_back(static_cast<int>(k), e);
            }
        }
        if (coeff.is_zero()) continue;
        if (poly_parts.empty()) {
            out.add_term(rest, coeff);
            continue;
        }
        Poly acc = Poly::constant(ctx_, coeff).mul_term(rest, Rational(1));
        for (auto [slot, e] : poly_parts) {
            int idx = bound_idx[static_cast<size_t>(slot)];
            auto& powers = poly_powers[idx];
            if (powers.empty()) powers.push_back(Poly::constant(ctx_, Rational(1)));
            while (static_cast<int>(powers.size()) <= e)
                powers.push_back(powers.back() * std::get<Poly>(*bound_val[static_cast<size_t>(slot)]));
            acc = acc * powers[static_cast<size_t>(e)];
        }
        out.add(acc);
    }
    return out.build();
}

Rational Poly::evaluate(const std::map<std::string, Rational>& point) const {
    std::vector<Rational> vals(static_cast<size_t>(nvars()));
    for (int i = 0; i < nvars(); ++i) {
        auto it = point.find(ctx_->name(i));
        if (it == point.end()) throw contract_error("unbound variable '" + ctx_->name(i) + "' in evaluation");
        vals[static_cast<size_t>(i)] = it->second;
    }
    return evaluate(vals);
}

Rational Poly::evaluate(const std::vector<Rational>& point) const {
    if (static_cast<int>(point.size()) != nvars())
        throw contract_error("evaluation point length does not match context");
    // per-variable power cache
    std::vector<std::vector<Rational>> powers(point.size());
    for (size_t i = 0; i < point.size(); ++i) powers[i].push_back(Rational(1));
    Rational sum(0);
    for (const Term& t : terms_) {
        Rational v = t.coeff;
        for (int i = 0; i < nvars(); ++i) {
            int e = t.mono.exp(i);
            if (e == 0) continue;
            auto& pw = powers[static_cast<size_t>(i)];
            while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * point[static_cast<size_t>(i)]);
            v *= pw[static_cast<size_t>(e)];
        }
        sum += v;
    }
    return sum;
}

std::pair<Poly, Poly> Poly::divide_exact(const Poly& p, const Poly& q) {
    p.check_same_context(q);
    if (q.is_zero()) throw math_error("division by zero polynomial");
    Poly quot(p.ctx_), rem(p.ctx_);
    std::map<Monomial, Rational, GrevlexGreater> cur;
    for (const Term& t : p.terms_) cur.emplace(t.mono, t.coeff);
    const Monomial& qm = q.leading_term().mono;
    const Rational& qc = q.leading_term().coeff;
    while (!cur.empty()) {
        auto lead = cur.begin();
        // processed leading monomials strictly decrease, so quotient and
        // remainder terms come out already sorted
        if (qm.divides(lead->first)) {
            Monomial tm = lead->first.divide_by(qm);
            Rational tc = lead->second / qc;
            quot.terms_.push_back({tm, tc});
            for (const Term& t : q.terms_) {
                Monomial m = t.mono * tm;
                Rational delta = t.coeff * tc;
                auto it = cur.find(m);
                if (it == cur.end()) {
                    cur.emplace(m, -delta);
                } else {
                    it->second -= delta;
                    if (it->second.is_zero()) cur.erase(it);
                }
            }
        } else {
            rem.terms_.push_back({lead->first, lead->second});
            cur.erase(lead);
        }
    }
    return {quot, rem};
}

std::string Poly::serialize() const {
    std::string out;
    serialize_into(out);
    return out;
}

void Poly::serialize_into(std::string& out) const {
    out += "vars " + std::to_string(nvars());
    for (int i = 0; i < nvars(); ++i) out += " " + ctx_->name(i);
    out += "\n";
    out += "terms " + std::to_string(terms_.size()) + "\n";
    for (const Term& t : terms_) {
        std::string line;
        for (int i = 0; i < nvars(); ++i) line += std::to_string(t.mono.exp(i)) + " ";
        line += t.coeff.num().get_str() + " " + t.coeff.den().get_str();
        out += line + "\n";
    }
}

Poly Poly::deserialize(const std::string& doc) {
    std::vector<std::string> lines;
    std::istringstream is(doc);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
    size_t pos = 0;
    return deserialize_lines(lines, pos);
}

Poly Poly::deserialize_lines(const std::vector<std::string>& lines, size_t& pos) {
    auto next = [&]() -> std::istringstream {
        if (pos >= lines.size()) throw parse_error("unexpected end of polynomial document", static_cast<int>(pos + 1));
        return std::istringstream(lines[pos++]);
    };
    auto head = next();
    std::string kw;
    int nv = -1;
    head >> kw >> nv;
    if (kw != "vars" || nv < 0) throw parse_error("expected 'vars <n> ...'", static_cast<int>(pos));
    std::vector<std::string> names;
    for (int i = 0; i < nv; ++i) {
        std::string n;
        if (!(head >> n)) throw parse_error("too few variable names", static_cast<int>(pos));
        names.push_back(n);
    }
    ContextPtr ctx = make_context(names);
    auto tline = next();
    size_t nterms = 0;
    tline >> kw >> nterms;
    if (kw != "terms") throw parse_error("expected 'terms <n>'", static_cast<int>(pos));
    std::vector<Term> terms;
    terms.reserve(nterms);
    for (size_t t = 0; t < nterms; ++t) {
        auto ls = next();
        Monomial m(nv);
        for (int i = 0; i < nv; ++i) {
            int e;
            if (!(ls >> e)) throw parse_error("bad term record", static_cast<int>(pos));
            m.set_exp(i, e);
        }
        std::string num, den;
        if (!(ls >> num >> den)) throw parse_error("bad term record", static_cast<int>(pos));
        mpz_class nz(num, 10), dz(den, 10);
        if (dz == 0) throw parse_error("zero denominator in term record", static_cast<int>(pos));
        mpq_class q(nz, dz);
        q.canonicalize();
        terms.push_back({m, Rational(q)});
    }
    return from_terms(ctx, std::move(terms));
}

std::string Poly::to_expression() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < terms_.size(); ++i) {
        const Term& t = terms_[i];
        Rational c = t.coeff;
        bool neg = c.sign() < 0;
        if (i == 0) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        Rational a = c.abs();
        std::vector<std::string> factors;
        if (!a.is_one() || t.mono.is_constant()) factors.push_back(a.str());
        for (int v = 0; v < nvars(); ++v) {
            int e = t.mono.exp(v);
            if (e == 0) continue;
            factors.push_back(e == 1 ? ctx_->name(v) : ctx_->name(v) + "^" + std::to_string(e));
        }
        for (size_t f = 0; f < factors.size(); ++f) {
            if (f) out += "*";
            out += factors[f];
        }
    }
    return out;
}

Poly Poly::transplanted(const ContextPtr& new_ctx) const {
    std::vector<Term> terms;
    terms.reserve(terms_.size());
    for (const Term& t : terms_) {
        Monomial m(new_ctx->size());
        for (int i = 0; i < nvars(); ++i) {
            int e = t.mono.exp(i);
            if (e == 0) continue;
            int j = new_ctx->index_of(ctx_->name(i));
            if (j < 0)
                throw contract_error("variable '" + ctx_->name(i) + "' not present in target context");
            m.set_exp(j, e);
        }
        terms.push_back({m, t.coeff});
    }
    return from_terms(new_ctx, std::move(terms));
}

void PolyBuilder::add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = acc_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) acc_.erase(it);
    }
}

void PolyBuilder::add(const Poly& p) {
    for (const Term& t : p.terms()) add_term(t.mono, t.coeff);
}

void PolyBuilder::add_scaled(const Poly& p, const Rational& c) {
    if (c.is_zero()) return;
    for (const Term& t : p.terms()) add_term(t.mono, t.coeff * c);
}

void PolyBuilder::add_product(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return;
    acc_.reserve(acc_.size() + a.term_count() * b.term_count() / 2);
    const Poly& outer = a.term_count() <= b.term_count() ? a : b;
    const Poly& inner = a.term_count() <= b.term_count() ? b : a;
    for (const Term& ta : outer.terms())
        for (const Term& tb : inner.terms()) add_term(ta.mono * tb.mono, ta.coeff * tb.coeff);
}

Poly PolyBuilder::build() {
    std::vector<Term> terms;
    terms.reserve(acc_.size());
    for (auto& [m, c] : acc_) terms.push_back({m, c});
    acc_.clear();
    return Poly::from_terms(ctx_, std::move(terms));
}

RationalFunction::RationalFunction(Poly num, Poly den)
    : numerator(std::move(num)), denominator(std::move(den)) {
    if (denominator.is_zero()) throw math_error("rational function with zero denominator");
    if (denominator.leading_term().coeff.sign() < 0) {
        denominator = -denominator;
        numerator = -numerator;
    }
}

std::string RationalFunction::str() const {
    if (denominator.is_constant() && denominator.leading_term().coeff.is_one())
        return numerator.to_expression();
    return "(" + numerator.to_expression() + ") / (" + denominator.to_expression() + ")";
}

} // namespace flowcurv
