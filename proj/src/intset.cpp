#include "sumset/intset.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sumset {

namespace detail {

int64_t DenseBits::count() const {
    int64_t c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
}

void DenseBits::or_shifted(const DenseBits& src, int64_t shift) {
    const int64_t q = shift >> 6;
    const int r = static_cast<int>(shift & 63);
    const size_t ns = src.words_.size();
    for (size_t i = 0; i < ns; ++i) {
        const uint64_t w = src.words_[i];
        if (!w) continue;
        const size_t j = i + static_cast<size_t>(q);
        if (j < words_.size()) words_[j] |= w << r;
        if (r && j + 1 < words_.size()) words_[j + 1] |= w >> (64 - r);
    }
}

std::vector<int64_t> DenseBits::collect(int64_t base) const {
    std::vector<int64_t> out;
    for (size_t i = 0; i < words_.size(); ++i) {
        uint64_t w = words_[i];
        while (w) {
            const int b = std::countr_zero(w);
            out.push_back(base + static_cast<int64_t>(i * 64 + b));
            w &= w - 1;
        }
    }
    return out;
}

}  // namespace detail

FiniteIntegerSet::FiniteIntegerSet() : FiniteIntegerSet(0, 0, {}) {}

FiniteIntegerSet::FiniteIntegerSet(int64_t lo, int64_t hi, std::vector<int64_t> elems)
    : lo_(lo), hi_(hi), elems_(std::move(elems)), mask_(hi - lo + 1) {
    if (lo_ > hi_) throw std::domain_error("window_lo must not exceed window_hi");
    for (int64_t v : elems_) {
        if (v < lo_ || v > hi_) {
            throw std::domain_error("element outside the declared window");
        }
        mask_.set(v - lo_);
    }
}

FiniteIntegerSet FiniteIntegerSet::from_elements(std::vector<int64_t> elems) {
    if (elems.empty()) {
        throw std::domain_error("an empty set needs an explicit window");
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    const int64_t lo = elems.front();
    const int64_t hi = elems.back();
    return FiniteIntegerSet(lo, hi, std::move(elems));
}

FiniteIntegerSet FiniteIntegerSet::from_elements(std::vector<int64_t> elems,
                                                 int64_t window_lo, int64_t window_hi) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return FiniteIntegerSet(window_lo, window_hi, std::move(elems));
}

FiniteIntegerSet FiniteIntegerSet::empty_window(int64_t window_lo, int64_t window_hi) {
    return FiniteIntegerSet(window_lo, window_hi, {});
}

int64_t FiniteIntegerSet::min() const {
    if (elems_.empty()) throw std::domain_error("min() of an empty set");
    return elems_.front();
}

int64_t FiniteIntegerSet::max() const {
    if (elems_.empty()) throw std::domain_error("max() of an empty set");
    return elems_.back();
}

SymmetricSet SymmetricSet::from_base(FiniteIntegerSet base) {
    if (base.window_lo() != -base.window_hi()) {
        throw std::domain_error("symmetric set window must be [-n, n]");
    }
    for (int64_t v : base.elements()) {
        if (!base.contains(-v)) {
            throw std::domain_error("set is not symmetric about zero");
        }
    }
    return SymmetricSet(std::move(base));
}

namespace {

void require_nonempty(const FiniteIntegerSet& a, const FiniteIntegerSet& b,
                      const char* op) {
    if (a.empty() || b.empty()) {
        throw std::domain_error(std::string(op) + " of an empty operand");
    }
}

}  // namespace

FiniteIntegerSet sumset(const FiniteIntegerSet& a, const FiniteIntegerSet& b) {
    return sumset_shift_or(a, b);
}

FiniteIntegerSet sumset_naive(const FiniteIntegerSet& a, const FiniteIntegerSet& b) {
    require_nonempty(a, b, "sumset");
    const int64_t lo = a.min() + b.min();
    const int64_t hi = a.max() + b.max();
    std::vector<char> hit(static_cast<size_t>(hi - lo + 1), 0);
    for (int64_t x : a.elements()) {
        for (int64_t y : b.elements()) {
            hit[static_cast<size_t>(x + y - lo)] = 1;
        }
    }
    std::vector<int64_t> out;
    for (size_t i = 0; i < hit.size(); ++i) {
        if (hit[i]) out.push_back(lo + static_cast<int64_t>(i));
    }
    return FiniteIntegerSet::from_elements(std::move(out), lo, hi);
}

FiniteIntegerSet sumset_shift_or(const FiniteIntegerSet& a, const FiniteIntegerSet& b) {
    require_nonempty(a, b, "sumset");
    const int64_t lo = a.min() + b.min();
    const int64_t hi = a.max() + b.max();
    // Trim b's mask to [min b, max b] so every shift below is nonnegative.
    detail::DenseBits bbits(b.max() - b.min() + 1);
    for (int64_t y : b.elements()) bbits.set(y - b.min());
    detail::DenseBits acc(hi - lo + 1);
    for (int64_t x : a.elements()) acc.or_shifted(bbits, x - a.min());
    return FiniteIntegerSet::from_elements(acc.collect(lo), lo, hi);
}

FiniteIntegerSet difference_set(const FiniteIntegerSet& a, const FiniteIntegerSet& b) {
    require_nonempty(a, b, "difference_set");
    const int64_t lo = a.min() - b.max();
    const int64_t hi = a.max() - b.min();
    std::vector<char> hit(static_cast<size_t>(hi - lo + 1), 0);
    for (int64_t x : a.elements()) {
        for (int64_t y : b.elements()) {
            hit[static_cast<size_t>(x - y - lo)] = 1;
        }
    }
    std::vector<int64_t> out;
    for (size_t i = 0; i < hit.size(); ++i) {
        if (hit[i]) out.push_back(lo + static_cast<int64_t>(i));
    }
    return FiniteIntegerSet::from_elements(std::move(out), lo, hi);
}

int64_t counting_function(const FiniteIntegerSet& a, int64_t x) {
    if (x > a.window_hi()) {
        throw std::domain_error("counting_function beyond the window would lie");
    }
    if (x < 1) return 0;
    const auto& e = a.elements();
    auto last = std::upper_bound(e.begin(), e.end(), x);
    auto first = std::lower_bound(e.begin(), e.end(), int64_t{1});
    return static_cast<int64_t>(last - first);
}

SymmetricSet symmetrize(const FiniteIntegerSet& c) {
    if (!c.empty() && c.min() < 0) {
        throw std::domain_error("symmetrize needs a nonnegative set");
    }
    const int64_t n = c.window_hi();
    if (n < 0) throw std::domain_error("symmetrize needs window_hi >= 0");
    std::vector<int64_t> elems;
    elems.reserve(c.size() * 2);
    for (int64_t v : c.elements()) {
        elems.push_back(v);
        elems.push_back(-v);
    }
    return SymmetricSet::from_base(
        FiniteIntegerSet::from_elements(std::move(elems), -n, n));
}

FiniteIntegerSet translate(const FiniteIntegerSet& a, int64_t t) {
    std::vector<int64_t> elems = a.elements();
    for (int64_t& v : elems) v += t;
    return FiniteIntegerSet::from_elements(std::move(elems), a.window_lo() + t,
                                           a.window_hi() + t);
}

FiniteIntegerSet reflect(const FiniteIntegerSet& a) {
    std::vector<int64_t> elems;
    elems.reserve(a.size());
    for (auto it = a.elements().rbegin(); it != a.elements().rend(); ++it) {
        elems.push_back(-*it);
    }
    return FiniteIntegerSet::from_elements(std::move(elems), -a.window_hi(),
                                           -a.window_lo());
}

FiniteIntegerSet restrict_to(const FiniteIntegerSet& a, int64_t lo, int64_t hi) {
    if (lo > hi) throw std::domain_error("restrict_to needs lo <= hi");
    std::vector<int64_t> elems;
    for (int64_t v : a.elements()) {
        if (v >= lo && v <= hi) elems.push_back(v);
    }
    return FiniteIntegerSet::from_elements(std::move(elems), lo, hi);
}

FiniteIntegerSet intersect(const FiniteIntegerSet& a, const FiniteIntegerSet& b) {
    const int64_t lo = std::max(a.window_lo(), b.window_lo());
    const int64_t hi = std::min(a.window_hi(), b.window_hi());
    if (lo > hi) return FiniteIntegerSet::empty_window(a.window_lo(), a.window_hi());
    std::vector<int64_t> elems;
    for (int64_t v : a.elements()) {
        if (v >= lo && v <= hi && b.contains(v)) elems.push_back(v);
    }
    return FiniteIntegerSet::from_elements(std::move(elems), lo, hi);
}

FiniteIntegerSet read_set(std::istream& in) {
    std::string line;
    std::vector<int64_t> elems;
    bool have_window = false;
    int64_t wlo = 0, whi = 0;
    int64_t prev = 0;
    bool have_prev = false;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') {
            std::istringstream hdr(line.substr(pos + 1));
            std::string tag;
            hdr >> tag;
            if (tag == "window") {
                if (!(hdr >> wlo >> whi) || wlo > whi) {
                    throw std::domain_error("bad window header at line " +
                                            std::to_string(lineno));
                }
                have_window = true;
            }
            continue;
        }
        std::istringstream body(line);
        int64_t v;
        if (!(body >> v)) {
            throw std::domain_error("unparsable integer at line " + std::to_string(lineno));
        }
        std::string rest;
        if (body >> rest && rest[0] != '#') {
            throw std::domain_error("trailing junk at line " + std::to_string(lineno));
        }
        if (have_prev && v <= prev) {
            throw std::domain_error("elements must be strictly ascending (line " +
                                    std::to_string(lineno) + ")");
        }
        prev = v;
        have_prev = true;
        elems.push_back(v);
    }
    if (!have_window) {
        if (elems.empty()) {
            throw std::domain_error("empty set file without a window header");
        }
        wlo = elems.front();
        whi = elems.back();
    }
    return FiniteIntegerSet::from_elements(std::move(elems), wlo, whi);
}

FiniteIntegerSet read_set_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open set file: " + path);
    return read_set(in);
}

void write_set(std::ostream& out, const FiniteIntegerSet& a) {
    out << "# sumset-lab set v1\n";
    out << "# window " << a.window_lo() << ' ' << a.window_hi() << '\n';
    for (int64_t v : a.elements()) out << v << '\n';
}

void write_set_file(const std::string& path, const FiniteIntegerSet& a) {
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot write set file: " + path);
    write_set(out, a);
}

}  // namespace sumset
