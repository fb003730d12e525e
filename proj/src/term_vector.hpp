#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace prosa {

using TermId = std::uint32_t;

// Sparse nonnegative term->weight vector, entries kept sorted by term id.
// Stored weights are strictly positive; zero-weight terms are omitted.
// After normalize() the L2 norm is 1 (empty vectors stay empty).
class TermVector {
public:
    using Entry = std::pair<TermId, double>;

    TermVector() = default;
    // Sorts by term id, merges duplicate ids, drops non-positive weights.
    explicit TermVector(std::vector<Entry> entries);

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    double weight(TermId t) const;  // 0 if absent
    double norm() const;
    double dot(const TermVector& other) const;

    // Keeps the `cap` largest weights; ties broken by ascending term id.
    void truncate(std::size_t cap);
    // Scales entries so the L2 norm is 1. No-op on empty vectors.
    void normalize();

    // Entry-wise wa*a + wb*b over the merged support.
    static TermVector weighted_sum(const TermVector& a, double wa,
                                   const TermVector& b, double wb);

    bool operator==(const TermVector&) const = default;

private:
    std::vector<Entry> entries_;
};

// Dot product of two unit vectors; 0 if either is empty. Range [0, 1] for
// nonnegative unit inputs (clamped against rounding spill).
double cosine_similarity(const TermVector& a, const TermVector& b);

}  // namespace prosa
