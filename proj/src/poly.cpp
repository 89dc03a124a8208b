#include "birknls/poly.hpp"

#include <algorithm>
#include <unordered_map>

namespace birknls {

ScalarPoly ScalarPoly::constant(cplx c) {
    ScalarPoly p;
    if (std::abs(c) > 0) p.terms_.push_back({mono::kOne, c});
    return p;
}

ScalarPoly ScalarPoly::variable(int v) {
    ScalarPoly p;
    p.terms_.push_back({mono::var(v), cplx(1, 0)});
    return p;
}

ScalarPoly ScalarPoly::monomial(uint64_t m, cplx c) {
    ScalarPoly p;
    if (std::abs(c) > 0) p.terms_.push_back({m, c});
    return p;
}

cplx ScalarPoly::coeff(uint64_t m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const auto& t, uint64_t k) { return t.first < k; });
    if (it != terms_.end() && it->first == m) return it->second;
    return cplx(0, 0);
}

void ScalarPoly::add_term(uint64_t m, cplx c) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const auto& t, uint64_t k) { return t.first < k; });
    if (it != terms_.end() && it->first == m) {
        it->second += c;
        if (std::abs(it->second) < kPruneTol) terms_.erase(it);
    } else if (std::abs(c) >= kPruneTol) {
        terms_.insert(it, {m, c});
    }
}

void ScalarPoly::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t w = 0;
    for (size_t i = 0; i < terms_.size();) {
        uint64_t key = terms_[i].first;
        cplx acc = terms_[i].second;
        size_t k = i + 1;
        while (k < terms_.size() && terms_[k].first == key) acc += terms_[k++].second;
        if (std::abs(acc) >= kPruneTol) terms_[w++] = {key, acc};
        i = k;
    }
    terms_.resize(w);
}

ScalarPoly poly_sum_raw(std::vector<std::pair<uint64_t, cplx>> raw) {
    ScalarPoly p;
    p.terms_ = std::move(raw);
    p.normalize();
    return p;
}

ScalarPoly ScalarPoly::operator+(const ScalarPoly& o) const {
    ScalarPoly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    size_t i = 0, k = 0;
    while (i < terms_.size() && k < o.terms_.size()) {
        if (terms_[i].first < o.terms_[k].first) r.terms_.push_back(terms_[i++]);
        else if (terms_[i].first > o.terms_[k].first) r.terms_.push_back(o.terms_[k++]);
        else {
            cplx c = terms_[i++].second + o.terms_[k++].second;
            if (std::abs(c) >= kPruneTol) r.terms_.push_back({terms_[i - 1].first, c});
        }
    }
    while (i < terms_.size()) r.terms_.push_back(terms_[i++]);
    while (k < o.terms_.size()) r.terms_.push_back(o.terms_[k++]);
    return r;
}

ScalarPoly ScalarPoly::operator-(const ScalarPoly& o) const { return *this + o * cplx(-1, 0); }

ScalarPoly& ScalarPoly::operator+=(const ScalarPoly& o) {
    *this = *this + o;
    return *this;
}

ScalarPoly ScalarPoly::operator*(cplx c) const {
    ScalarPoly r;
    if (std::abs(c) == 0) return r;
    r.terms_ = terms_;
    for (auto& t : r.terms_) t.second *= c;
    r.prune();
    return r;
}

ScalarPoly ScalarPoly::mul(const ScalarPoly& o, int cap) const {
    std::unordered_map<uint64_t, cplx> acc;
    acc.reserve(terms_.size() + o.terms_.size());
    uint64_t m;
    for (const auto& a : terms_)
        for (const auto& b : o.terms_)
            if (mono::mul(a.first, b.first, cap, m)) acc[m] += a.second * b.second;
    std::vector<std::pair<uint64_t, cplx>> raw(acc.begin(), acc.end());
    return poly_sum_raw(std::move(raw));
}

ScalarPoly ScalarPoly::derivative(int v) const {
    ScalarPoly r;
    for (const auto& t : terms_) {
        int e = mono::exponent_of(t.first, v);
        if (e == 0) continue;
        uint64_t m;
        mono::divide_once(t.first, v, m);
        r.terms_.push_back({m, t.second * double(e)});
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return r;
}

ScalarPoly ScalarPoly::majorant() const {
    ScalarPoly r = *this;
    for (auto& t : r.terms_) t.second = std::abs(t.second);
    return r;
}

ScalarPoly ScalarPoly::filter(const std::function<bool(uint64_t)>& pred) const {
    ScalarPoly r;
    for (const auto& t : terms_)
        if (pred(t.first)) r.terms_.push_back(t);
    return r;
}

ScalarPoly ScalarPoly::map_coeff(const std::function<cplx(uint64_t, cplx)>& fn) const {
    ScalarPoly r;
    for (const auto& t : terms_) {
        cplx c = fn(t.first, t.second);
        if (std::abs(c) >= kPruneTol) r.terms_.push_back({t.first, c});
    }
    return r;
}

ScalarPoly ScalarPoly::degree_part(int d) const {
    return filter([d](uint64_t m) { return mono::degree(m) == d; });
}

ScalarPoly ScalarPoly::degree_leq(int d) const {
    return filter([d](uint64_t m) { return mono::degree(m) <= d; });
}

int ScalarPoly::max_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, mono::degree(t.first));
    return d;
}

int ScalarPoly::min_degree() const {
    if (terms_.empty()) return 0;
    int d = kMaxPolyDegree + 1;
    for (const auto& t : terms_) d = std::min(d, mono::degree(t.first));
    return d;
}

ScalarPoly ScalarPoly::t_integrate() const {
    ScalarPoly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        int p = mono::tpow(t.first);
        r.terms_.push_back({mono::t_times(t.first, 1), t.second / double(p + 1)});
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return r;
}

ScalarPoly ScalarPoly::t_eval(double tval) const {
    std::vector<std::pair<uint64_t, cplx>> raw;
    raw.reserve(terms_.size());
    for (const auto& t : terms_) {
        int p = mono::tpow(t.first);
        raw.push_back({mono::drop_t(t.first), t.second * std::pow(tval, p)});
    }
    return poly_sum_raw(std::move(raw));
}

int ScalarPoly::max_tpow() const {
    int p = 0;
    for (const auto& t : terms_) p = std::max(p, mono::tpow(t.first));
    return p;
}

double ScalarPoly::max_abs_coeff() const {
    double m = 0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.second));
    return m;
}

double ScalarPoly::sum_abs_coeff() const {
    double m = 0;
    for (const auto& t : terms_) m += std::abs(t.second);
    return m;
}

cplx ScalarPoly::eval(const std::vector<cplx>& vars) const {
    cplx acc(0, 0);
    for (const auto& t : terms_) {
        if (mono::tpow(t.first) != 0)
            throw std::logic_error("ScalarPoly::eval: t not eliminated");
        cplx prod = t.second;
        mono::foreach_var(t.first, [&](int v, int e) {
            for (int i = 0; i < e; ++i) prod *= vars.at(v);
        });
        acc += prod;
    }
    return acc;
}

void ScalarPoly::prune(double tol) {
    size_t w = 0;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (std::abs(terms_[i].second) >= tol) terms_[w++] = terms_[i];
    terms_.resize(w);
}

}  // namespace birknls
