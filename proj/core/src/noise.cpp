#include "speedlab/noise.hpp"

#include <algorithm>
#include <stdexcept>

namespace speedlab {

namespace {

void check_window(Site lo, Site hi, double horizon, double rate, double mark_probability) {
    if (hi < lo) throw std::invalid_argument("NoiseField: window [lo, hi] is empty");
    if (!(horizon >= 0.0)) throw std::invalid_argument("NoiseField: horizon must be >= 0");
    if (!(rate > 0.0)) throw std::invalid_argument("NoiseField: rate must be > 0");
    if (!(mark_probability >= 0.0 && mark_probability <= 1.0))
        throw std::invalid_argument("NoiseField: mark probability must lie in [0, 1]");
}

}  // namespace

void NoiseField::append_bond(RngStream& rng) {
    double t = rng.exponential(rate_);
    while (t <= horizon_) {
        times_.push_back(t);
        marks_.push_back(rng.bernoulli(mark_probability_) ? 1 : 0);
        t += rng.exponential(rate_);
    }
    offsets_.push_back(times_.size());
}

NoiseField NoiseField::sample(RngStream& rng, Site lo, Site hi, double horizon, double rate,
                              double mark_probability) {
    check_window(lo, hi, horizon, rate, mark_probability);
    NoiseField f;
    f.lo_ = lo;
    f.hi_ = hi;
    f.horizon_ = horizon;
    f.rate_ = rate;
    f.mark_probability_ = mark_probability;
    f.offsets_.reserve(static_cast<std::size_t>(hi - lo + 1));
    f.offsets_.push_back(0);
    const auto expected = static_cast<std::size_t>(static_cast<double>(hi - lo) * rate * horizon * 1.05) + 16;
    f.times_.reserve(expected);
    f.marks_.reserve(expected);
    for (Site n = lo; n < hi; ++n) f.append_bond(rng);
    return f;
}

NoiseField NoiseField::empty(Site lo, Site hi, double horizon, double rate, double mark_probability) {
    check_window(lo, hi, horizon, rate, mark_probability);
    NoiseField f;
    f.lo_ = lo;
    f.hi_ = hi;
    f.horizon_ = horizon;
    f.rate_ = rate;
    f.mark_probability_ = mark_probability;
    f.offsets_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    return f;
}

NoiseField NoiseField::embed(const NoiseField& inner, RngStream& rng, Site lo, Site hi) {
    if (lo > inner.lo_ || hi < inner.hi_)
        throw std::invalid_argument("NoiseField::embed: target window must contain the inner window");
    NoiseField f;
    f.lo_ = lo;
    f.hi_ = hi;
    f.horizon_ = inner.horizon_;
    f.rate_ = inner.rate_;
    f.mark_probability_ = inner.mark_probability_;
    f.offsets_.push_back(0);
    for (Site n = lo; n < hi; ++n) {
        if (n >= inner.lo_ && n < inner.hi_) {
            const auto t = inner.times(n);
            const auto m = inner.marks(n);
            f.times_.insert(f.times_.end(), t.begin(), t.end());
            f.marks_.insert(f.marks_.end(), m.begin(), m.end());
            f.offsets_.push_back(f.times_.size());
        } else {
            f.append_bond(rng);
        }
    }
    return f;
}

NoiseField NoiseField::from_events(Site lo, Site hi, double horizon, std::span<const BondEvent> events,
                                   double rate, double mark_probability) {
    check_window(lo, hi, horizon, rate, mark_probability);
    std::vector<BondEvent> sorted(events.begin(), events.end());
    for (const auto& e : sorted) {
        if (e.bond < lo || e.bond >= hi) throw std::invalid_argument("NoiseField::from_events: bond outside window");
        if (e.time < 0.0 || e.time > horizon) throw std::invalid_argument("NoiseField::from_events: time outside [0, horizon]");
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const BondEvent& a, const BondEvent& b) {
        return a.bond != b.bond ? a.bond < b.bond : a.time < b.time;
    });
    NoiseField f = empty(lo, hi, horizon, rate, mark_probability);
    f.offsets_.assign(1, 0);
    std::size_t k = 0;
    for (Site n = lo; n < hi; ++n) {
        while (k < sorted.size() && sorted[k].bond == n) {
            f.times_.push_back(sorted[k].time);
            f.marks_.push_back(sorted[k].mark ? 1 : 0);
            ++k;
        }
        f.offsets_.push_back(f.times_.size());
    }
    return f;
}

std::span<const double> NoiseField::times(Site bond) const {
    if (bond < lo_ || bond >= hi_) throw std::out_of_range("NoiseField: bond outside window");
    const auto i = static_cast<std::size_t>(bond - lo_);
    return std::span<const double>(times_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::span<const std::uint8_t> NoiseField::marks(Site bond) const {
    if (bond < lo_ || bond >= hi_) throw std::out_of_range("NoiseField: bond outside window");
    const auto i = static_cast<std::size_t>(bond - lo_);
    return std::span<const std::uint8_t>(marks_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::vector<BondEvent> NoiseField::events_until(double t) const {
    std::vector<BondEvent> out;
    out.reserve(times_.size());
    for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
        const Site bond = lo_ + static_cast<Site>(i);
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1] && times_[k] <= t; ++k)
            out.push_back({times_[k], bond, marks_[k] != 0});
    }
    std::sort(out.begin(), out.end(), [](const BondEvent& a, const BondEvent& b) {
        return a.time != b.time ? a.time < b.time : a.bond < b.bond;
    });
    return out;
}

}  // namespace speedlab
