#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <iterator>
#include <optional>
#include <span>
#include <vector>

#include "ladartrack/association.hpp"
#include "ladartrack/kalman.hpp"
#include "ladartrack/labeling.hpp"
#include "ladartrack/track.hpp"

namespace ladar {

struct TrackerConfig {
    static constexpr std::size_t kHistoryLength = 10;
    static constexpr int kMaxSelectableCoast = 7;

    std::size_t t_max = 10;
    int max_coast = 3;  ///< a track is lost on miss number max_coast + 1
    AssociationConfig assoc;
    ImportanceConfig importance;
    KalmanParams kalman;

    void validate() const;
};

using SlotLink = std::optional<std::size_t>;

/// Snapshot of one tracker step. `fw[mt]` is the slot of track mt in the next
/// step (filled once that step runs); `bw[nt]` is its slot in the previous one.
struct HistoryEntry {
    std::size_t step = 0;
    std::vector<Track> tracks;
    std::vector<SlotLink> fw;
    std::vector<SlotLink> bw;
};

/// Circular record of the last kHistoryLength steps.
class HistoryRing {
public:
    static constexpr std::size_t kCapacity = TrackerConfig::kHistoryLength;

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const HistoryEntry& newest() const { return entries_.back(); }
    HistoryEntry& newest() { return entries_.back(); }
    const HistoryEntry& oldest() const { return entries_.front(); }

    /// nullptr when the step is not (or no longer) held.
    const HistoryEntry* find(std::size_t step) const;

    /// Appends, evicting the oldest entry when full.
    void push(HistoryEntry entry);

    const std::deque<HistoryEntry>& entries() const { return entries_; }

    /// Throws InvariantViolation if steps are not contiguous or links disagree.
    void check_consistency() const;

private:
    std::deque<HistoryEntry> entries_;
};

double track_importance(const Track& t, const ImportanceConfig& cfg);

/// Two-pointer merge of lists already sorted by descending score. On equal
/// scores elements of `a` come first.
template <class T, class Score>
std::vector<T> merge_sorted(std::vector<T> a, std::vector<T> b, Score score) {
    std::vector<T> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (score(b[j]) > score(a[i])) {
            out.push_back(std::move(b[j++]));
        } else {
            out.push_back(std::move(a[i++]));
        }
    }
    std::move(a.begin() + static_cast<std::ptrdiff_t>(i), a.end(), std::back_inserter(out));
    std::move(b.begin() + static_cast<std::ptrdiff_t>(j), b.end(), std::back_inserter(out));
    return out;
}

std::vector<Track> merge_sorted(std::vector<Track> a, std::vector<Track> b,
                                const ImportanceConfig& cfg);

struct StepReport {
    std::size_t step = 0;
    std::size_t merged = 0;     ///< list length before truncation (<= 2 * t_max)
    std::size_t truncated = 0;  ///< tracks dropped by the t_max cut
    std::size_t lost = 0;       ///< coasting tracks that ran out of chances
    std::size_t matched = 0;
};

/// Owner of the track list and history ring. Steps are strictly sequential.
class Tracker {
public:
    explicit Tracker(TrackerConfig cfg);

    /// Consume the importance-sorted observations of the next step.
    /// Throws ConfigViolation if there are more than t_max of them.
    const std::vector<Track>& step(std::span<const TargetObservation> observations);

    const std::vector<Track>& tracks() const;
    const HistoryRing& ring() const { return ring_; }
    const StepReport& last_report() const { return report_; }
    const TrackerConfig& config() const { return cfg_; }
    std::size_t steps_run() const { return next_step_; }

    /// Full invariant sweep; throws InvariantViolation.
    void check_invariants() const;

private:
    Track make_track(const TargetObservation& obs);

    TrackerConfig cfg_;
    HistoryRing ring_;
    StepReport report_;
    std::size_t next_step_ = 0;
    std::uint64_t next_id_ = 1;
    std::uint64_t max_issued_id_ = 0;
};

struct StepSlot {
    std::size_t step = 0;
    std::size_t slot = 0;

    bool operator==(const StepSlot&) const = default;
};

/// Follow forward links from (start_step, slot) until a link is missing or the
/// newest entry is reached. Throws EntryEvicted if start_step is not held.
std::vector<StepSlot> reconstruct_forward(const HistoryRing& ring, std::size_t start_step,
                                          std::size_t slot);

/// Mirror of reconstruct_forward over backward links; the chain is returned
/// from end_step backwards.
std::vector<StepSlot> reconstruct_backward(const HistoryRing& ring, std::size_t end_step,
                                           std::size_t slot);

}  // namespace ladar
