#include "cubedac/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "cubedac/mathutil.hpp"

namespace cubedac {

namespace {

// Endpoints closer than this are collapsed onto one breakpoint so that
// numerically coincident bounds cannot create spurious zero-width regions.
constexpr double kMergeTol = 1e-12;

struct ClippedInterval {
    double lo, hi;
    double weight;
    bool lo_closed, hi_closed;
};

struct SlotEvent {
    std::int64_t slot;
    double weight;
};

// Index of the breakpoint cluster containing q. Every query is one of the
// points that built the cluster list, so the largest representative <= q is
// exactly its cluster.
std::size_t cluster_of(const std::vector<double>& reps, double q) {
    auto it = std::upper_bound(reps.begin(), reps.end(), q);
    return static_cast<std::size_t>(it - reps.begin()) - 1;
}

}  // namespace

SweepResult sweep_max(std::span<const WeightedInterval> intervals, Bounds bounds) {
    if (!std::isfinite(bounds.lo) || !std::isfinite(bounds.hi))
        throw std::invalid_argument("non-finite-input: bounds");
    if (!(bounds.lo < bounds.hi))
        throw std::invalid_argument("empty-domain: bounds.lo must be < bounds.hi");

    std::vector<ClippedInterval> live;
    live.reserve(intervals.size());
    std::vector<double> points;
    points.reserve(2 * intervals.size() + 2);
    points.push_back(bounds.lo);
    points.push_back(bounds.hi);

    for (const WeightedInterval& iv : intervals) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !std::isfinite(iv.weight))
            throw std::invalid_argument("non-finite-input: interval");
        if (iv.lo > iv.hi)
            throw std::invalid_argument("invalid interval: lo > hi");
        if (iv.lo == iv.hi && !(iv.lo_closed && iv.hi_closed))
            throw std::invalid_argument("invalid interval: degenerate point must be closed");
        if (iv.weight == 0.0) continue;

        double lo = iv.lo, hi = iv.hi;
        bool loc = iv.lo_closed, hic = iv.hi_closed;
        // Clip to the domain; domain endpoints are attainable, so a bound
        // that truncates an interval becomes a closed end.
        if (hi < bounds.lo || lo > bounds.hi) continue;
        if (hi == bounds.lo && !hic) continue;
        if (lo == bounds.hi && !loc) continue;
        if (lo < bounds.lo) { lo = bounds.lo; loc = true; }
        if (hi > bounds.hi) { hi = bounds.hi; hic = true; }
        if (lo == hi && !(loc && hic)) continue;  // clipped away to nothing

        live.push_back({lo, hi, iv.weight, loc, hic});
        points.push_back(lo);
        points.push_back(hi);
    }

    // Cluster breakpoints. A new cluster starts when the gap to the previous
    // point exceeds the tolerance; the representative is the first member.
    std::sort(points.begin(), points.end());
    std::vector<double> reps;
    reps.reserve(points.size());
    double prev = points.front();
    reps.push_back(prev);
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i] - prev > kMergeTol) reps.push_back(points[i]);
        prev = points[i];
    }

    const std::size_t m = reps.size();
    const std::int64_t n_slots = static_cast<std::int64_t>(2 * m - 1);
    // Slot 2k is the single breakpoint [reps[k]]; slot 2k+1 is the open gap
    // (reps[k], reps[k+1]).

    std::vector<SlotEvent> events;
    events.reserve(2 * live.size());
    for (const ClippedInterval& iv : live) {
        const std::int64_t klo = static_cast<std::int64_t>(cluster_of(reps, iv.lo));
        const std::int64_t khi = static_cast<std::int64_t>(cluster_of(reps, iv.hi));
        const std::int64_t s = 2 * klo + (iv.lo_closed ? 0 : 1);
        const std::int64_t e = 2 * khi - (iv.hi_closed ? 0 : 1);
        if (s > e) continue;  // merged into an empty region
        events.push_back({s, iv.weight});
        events.push_back({e + 1, -iv.weight});
    }
    std::sort(events.begin(), events.end(),
              [](const SlotEvent& a, const SlotEvent& b) { return a.slot < b.slot; });

    // Exactly rounded running sum per slot. The expansion tracks the true
    // running total, so equal active-weight sets give bit-equal values and
    // ties are decided by exact comparison.
    std::vector<double> value(static_cast<std::size_t>(n_slots));
    {
        ExactSum acc;
        std::size_t ev = 0;
        for (std::int64_t slot = 0; slot < n_slots; ++slot) {
            while (ev < events.size() && events[ev].slot == slot) {
                acc.add(events[ev].weight);
                ++ev;
            }
            value[static_cast<std::size_t>(slot)] = acc.value();
        }
    }

    SweepResult result;
    result.max_value = *std::max_element(value.begin(), value.end());

    for (std::int64_t slot = 0; slot < n_slots;) {
        if (value[static_cast<std::size_t>(slot)] != result.max_value) {
            ++slot;
            continue;
        }
        std::int64_t run_end = slot;
        while (run_end + 1 < n_slots &&
               value[static_cast<std::size_t>(run_end + 1)] == result.max_value)
            ++run_end;
        MaximizerInterval piece{};
        if (slot % 2 == 0) {
            piece.lo = reps[static_cast<std::size_t>(slot / 2)];
            piece.lo_closed = true;
        } else {
            piece.lo = reps[static_cast<std::size_t>((slot - 1) / 2)];
            piece.lo_closed = false;
        }
        if (run_end % 2 == 0) {
            piece.hi = reps[static_cast<std::size_t>(run_end / 2)];
            piece.hi_closed = true;
        } else {
            piece.hi = reps[static_cast<std::size_t>((run_end + 1) / 2)];
            piece.hi_closed = false;
        }
        result.maximizing_set.push_back(piece);
        slot = run_end + 1;
    }

    const MaximizerInterval& first = result.maximizing_set.front();
    result.representative = (first.lo == first.hi) ? first.lo : 0.5 * (first.lo + first.hi);
    return result;
}

}  // namespace cubedac
