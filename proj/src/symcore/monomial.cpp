#include "phase_atlas/symcore/monomial.hpp"

#include <algorithm>

namespace phase_atlas {

Monomial Monomial::variable(VarIndex v, std::uint32_t exponent) {
    Monomial m;
    if (exponent > 0) {
        m.factors_.emplace_back(v, exponent);
        m.degree_ = exponent;
    }
    return m;
}

Monomial Monomial::from_factors(std::vector<Factor> factors) {
    std::sort(factors.begin(), factors.end());
    Monomial m;
    for (const auto& [v, e] : factors) {
        if (e == 0)
            continue;
        if (!m.factors_.empty() && m.factors_.back().first == v)
            m.factors_.back().second += e;
        else
            m.factors_.emplace_back(v, e);
        m.degree_ += e;
    }
    return m;
}

std::uint32_t Monomial::exponent(VarIndex v) const noexcept {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{v, 0});
    return (it != factors_.end() && it->first == v) ? it->second : 0;
}

bool Monomial::divides(const Monomial& other) const noexcept {
    if (degree_ > other.degree_)
        return false;
    auto j = other.factors_.begin();
    for (const auto& [v, e] : factors_) {
        while (j != other.factors_.end() && j->first < v)
            ++j;
        if (j == other.factors_.end() || j->first != v || j->second < e)
            return false;
    }
    return true;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
    Monomial q;
    auto j = divisor.factors_.begin();
    for (const auto& [v, e] : factors_) {
        std::uint32_t d = 0;
        if (j != divisor.factors_.end() && j->first == v) {
            d = j->second;
            ++j;
        }
        if (e > d) {
            q.factors_.emplace_back(v, e - d);
            q.degree_ += e - d;
        }
    }
    return q;
}

Monomial Monomial::without(VarIndex v) const {
    Monomial m;
    for (const auto& f : factors_) {
        if (f.first == v)
            continue;
        m.factors_.push_back(f);
        m.degree_ += f.second;
    }
    return m;
}

Monomial Monomial::restricted_to(std::span<const VarIndex> sorted_vars) const {
    Monomial m;
    for (const auto& f : factors_) {
        if (std::binary_search(sorted_vars.begin(), sorted_vars.end(), f.first)) {
            m.factors_.push_back(f);
            m.degree_ += f.second;
        }
    }
    return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
        if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
            m.factors_.push_back(*i++);
        } else if (i == a.factors_.end() || j->first < i->first) {
            m.factors_.push_back(*j++);
        } else {
            m.factors_.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    m.degree_ = a.degree_ + b.degree_;
    return m;
}

Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial m;
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
        if (i->first < j->first) {
            ++i;
        } else if (j->first < i->first) {
            ++j;
        } else {
            auto e = std::min(i->second, j->second);
            m.factors_.emplace_back(i->first, e);
            m.degree_ += e;
            ++i;
            ++j;
        }
    }
    return m;
}

int compare_grlex(const Monomial& a, const Monomial& b) noexcept {
    if (a.degree() != b.degree())
        return a.degree() > b.degree() ? 1 : -1;
    auto fa = a.factors();
    auto fb = b.factors();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < fa.size() && j < fb.size()) {
        if (fa[i].first != fb[j].first)
            return fa[i].first < fb[j].first ? 1 : -1;
        if (fa[i].second != fb[j].second)
            return fa[i].second > fb[j].second ? 1 : -1;
        ++i;
        ++j;
    }
    if (i < fa.size())
        return 1;
    if (j < fb.size())
        return -1;
    return 0;
}

std::size_t hash_value(const Monomial& m) noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& [v, e] : m.factors()) {
        h ^= (static_cast<std::size_t>(v) << 20) ^ e;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace phase_atlas
