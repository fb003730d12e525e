#include "term_vector.hpp"

#include <algorithm>
#include <cmath>

namespace prosa {

TermVector::TermVector(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    entries_.reserve(entries.size());
    for (const auto& [id, w] : entries) {
        if (w <= 0.0) continue;
        if (!entries_.empty() && entries_.back().first == id) {
            entries_.back().second += w;
        } else {
            entries_.emplace_back(id, w);
        }
    }
}

double TermVector::weight(TermId t) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                               [](const Entry& e, TermId id) { return e.first < id; });
    return (it != entries_.end() && it->first == t) ? it->second : 0.0;
}

double TermVector::norm() const {
    double s = 0.0;
    for (const auto& [id, w] : entries_) s += w * w;
    return std::sqrt(s);
}

double TermVector::dot(const TermVector& other) const {
    const TermVector* small = this;
    const TermVector* big = &other;
    if (small->size() > big->size()) std::swap(small, big);
    if (small->empty()) return 0.0;

    double s = 0.0;
    // Binary-search the larger side when the sizes are lopsided.
    if (big->size() > 8 * small->size()) {
        for (const auto& [id, w] : small->entries_) s += w * big->weight(id);
        return s;
    }
    auto a = small->entries_.begin(), ae = small->entries_.end();
    auto b = big->entries_.begin(), be = big->entries_.end();
    while (a != ae && b != be) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            s += a->second * b->second;
            ++a;
            ++b;
        }
    }
    return s;
}

void TermVector::truncate(std::size_t cap) {
    if (entries_.size() <= cap) return;
    auto heavier = [](const Entry& x, const Entry& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    };
    std::nth_element(entries_.begin(), entries_.begin() + cap, entries_.end(), heavier);
    entries_.resize(cap);
    std::sort(entries_.begin(), entries_.end());
}

void TermVector::normalize() {
    double n = norm();
    if (n == 0.0) return;
    for (auto& [id, w] : entries_) w /= n;
}

TermVector TermVector::weighted_sum(const TermVector& a, double wa,
                                    const TermVector& b, double wb) {
    std::vector<Entry> merged;
    merged.reserve(a.size() + b.size());
    auto ia = a.entries_.begin(), ea = a.entries_.end();
    auto ib = b.entries_.begin(), eb = b.entries_.end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->first < ib->first)) {
            merged.emplace_back(ia->first, wa * ia->second);
            ++ia;
        } else if (ia == ea || ib->first < ia->first) {
            merged.emplace_back(ib->first, wb * ib->second);
            ++ib;
        } else {
            merged.emplace_back(ia->first, wa * ia->second + wb * ib->second);
            ++ia;
            ++ib;
        }
    }
    return TermVector(std::move(merged));
}

double cosine_similarity(const TermVector& a, const TermVector& b) {
    if (a.empty() || b.empty()) return 0.0;
    double s = a.dot(b);
    if (s < 0.0) return 0.0;
    if (s > 1.0) return 1.0;
    return s;
}

}  // namespace prosa
