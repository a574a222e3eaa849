#pragma once
// Finite integer sets over an explicit window [window_lo, window_hi], stored
// twice: as the sorted element list and as a dense bitmask over the window.
// Both views are built together and never drift apart. Values are immutable;
// every operation returns a new set. Operations whose result can fall outside
// the operand windows grow the window instead of truncating.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sumset {

namespace detail {

// Dense bit vector over [0, nbits). Plumbing shared by the set type, the
// decomposition solvers and the pattern counters; not a stable interface.
class DenseBits {
public:
    DenseBits() = default;
    explicit DenseBits(int64_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    int64_t size() const { return nbits_; }
    bool test(int64_t i) const {
        return (words_[static_cast<size_t>(i >> 6)] >> (i & 63)) & 1;
    }
    void set(int64_t i) {
        words_[static_cast<size_t>(i >> 6)] |= uint64_t(1) << (i & 63);
    }
    void reset(int64_t i) {
        words_[static_cast<size_t>(i >> 6)] &= ~(uint64_t(1) << (i & 63));
    }
    int64_t count() const;
    // dst |= (src << shift), shift >= 0, within dst's size.
    void or_shifted(const DenseBits& src, int64_t shift);
    // Sorted list of set positions, each offset by base.
    std::vector<int64_t> collect(int64_t base) const;

    const std::vector<uint64_t>& words() const { return words_; }
    std::vector<uint64_t>& words() { return words_; }

private:
    int64_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace detail

class FiniteIntegerSet {
public:
    // Empty set over the window [0, 0].
    FiniteIntegerSet();

    // Window defaults to [min(elems), max(elems)]. Input may be unsorted;
    // duplicates collapse. An empty element list needs an explicit window.
    static FiniteIntegerSet from_elements(std::vector<int64_t> elems);
    static FiniteIntegerSet from_elements(std::vector<int64_t> elems,
                                          int64_t window_lo, int64_t window_hi);
    static FiniteIntegerSet empty_window(int64_t window_lo, int64_t window_hi);

    int64_t window_lo() const { return lo_; }
    int64_t window_hi() const { return hi_; }
    const std::vector<int64_t>& elements() const { return elems_; }
    size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    bool contains(int64_t v) const {
        return v >= lo_ && v <= hi_ && mask_.test(v - lo_);
    }
    int64_t min() const;  // throws std::domain_error when empty
    int64_t max() const;

    const detail::DenseBits& mask() const { return mask_; }

    bool operator==(const FiniteIntegerSet& o) const {
        return lo_ == o.lo_ && hi_ == o.hi_ && elems_ == o.elems_;
    }
    bool operator!=(const FiniteIntegerSet& o) const { return !(*this == o); }

private:
    FiniteIntegerSet(int64_t lo, int64_t hi, std::vector<int64_t> elems);

    int64_t lo_ = 0;
    int64_t hi_ = 0;
    std::vector<int64_t> elems_;
    detail::DenseBits mask_;
};

// A set equal to its own reflection, windowed [-n, n].
class SymmetricSet {
public:
    static SymmetricSet from_base(FiniteIntegerSet base);  // validates symmetry
    const FiniteIntegerSet& base() const { return base_; }
    int64_t radius() const { return base_.window_hi(); }
    bool contains(int64_t v) const { return base_.contains(v); }

private:
    explicit SymmetricSet(FiniteIntegerSet base) : base_(std::move(base)) {}
    FiniteIntegerSet base_;
};

// {a + b : a in A, b in B}, windowed [min A + min B, max A + max B].
// Two kernels with identical contracts: the quadratic loop and the word-level
// shift-or over the bitmasks. sumset() is the shift-or kernel; the naive one
// stays public so tests can hold them against each other. Empty operands are
// a domain error (there is no honest window for the result).
FiniteIntegerSet sumset(const FiniteIntegerSet& a, const FiniteIntegerSet& b);
FiniteIntegerSet sumset_naive(const FiniteIntegerSet& a, const FiniteIntegerSet& b);
FiniteIntegerSet sumset_shift_or(const FiniteIntegerSet& a, const FiniteIntegerSet& b);

// {a - b}, windowed [min A - max B, max A - min B]. Deliberately implemented
// as its own quadratic loop, not as sumset(a, reflect(b)), so the reflection
// identity stays a meaningful cross-check.
FiniteIntegerSet difference_set(const FiniteIntegerSet& a, const FiniteIntegerSet& b);

// |A ∩ [1, x]|. Zero never counts. x past window_hi is a domain error:
// truncation would silently lie about elements we never materialized.
int64_t counting_function(const FiniteIntegerSet& a, int64_t x);

// C ∪ (-C) over [-N, N] with N = C.window_hi(). Negative elements are a
// domain error.
SymmetricSet symmetrize(const FiniteIntegerSet& c);

FiniteIntegerSet translate(const FiniteIntegerSet& a, int64_t t);
FiniteIntegerSet reflect(const FiniteIntegerSet& a);
// Intersection with [lo, hi]; the result window is exactly [lo, hi].
FiniteIntegerSet restrict_to(const FiniteIntegerSet& a, int64_t lo, int64_t hi);
FiniteIntegerSet intersect(const FiniteIntegerSet& a, const FiniteIntegerSet& b);

// Set files: UTF-8 text, one integer per line, strictly ascending, '#' starts
// a comment. "# window LO HI" declares the window (default: [min, max] of the
// data; an empty body then needs the header). Writer emits a format tag line.
FiniteIntegerSet read_set(std::istream& in);
FiniteIntegerSet read_set_file(const std::string& path);
void write_set(std::ostream& out, const FiniteIntegerSet& a);
void write_set_file(const std::string& path, const FiniteIntegerSet& a);

}  // namespace sumset
