#include "ladartrack/track_manager.hpp"

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "ladartrack/errors.hpp"

namespace ladar {

std::string_view to_string(TrackState s) {
    switch (s) {
        case TrackState::Coasting:
            return "coasting";
        case TrackState::New:
            return "new";
        case TrackState::Reacquired:
            return "reacquired";
        case TrackState::Matched:
            return "matched";
    }
    return "unknown";
}

void TrackerConfig::validate() const {
    if (t_max < 1) {
        throw InvalidConfig("t_max must be >= 1");
    }
    if (max_coast < 1 || max_coast > kMaxSelectableCoast) {
        throw InvalidConfig("max_coast must lie in [1, 7]");
    }
    assoc.validate();
    importance.validate();
    kalman.validate();
}

// ---- HistoryRing ----

const HistoryEntry* HistoryRing::find(std::size_t step) const {
    if (entries_.empty() || step < entries_.front().step || step > entries_.back().step) {
        return nullptr;
    }
    return &entries_[step - entries_.front().step];
}

void HistoryRing::push(HistoryEntry entry) {
    if (entries_.size() == kCapacity) {
        entries_.pop_front();
    }
    entries_.push_back(std::move(entry));
}

void HistoryRing::check_consistency() const {
    if (entries_.size() > kCapacity) {
        throw InvariantViolation("history ring exceeds its capacity");
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const HistoryEntry& e = entries_[k];
        if (e.fw.size() != e.tracks.size() || e.bw.size() != e.tracks.size()) {
            throw InvariantViolation("link arrays do not match track count at step " +
                                     std::to_string(e.step));
        }
        if (k == 0) {
            continue;
        }
        const HistoryEntry& p = entries_[k - 1];
        if (e.step != p.step + 1) {
            throw InvariantViolation("history ring steps are not contiguous");
        }
        for (std::size_t mt = 0; mt < p.fw.size(); ++mt) {
            if (p.fw[mt] && (*p.fw[mt] >= e.bw.size() || e.bw[*p.fw[mt]] != mt)) {
                throw InvariantViolation("forward link without matching backward link at step " +
                                         std::to_string(p.step));
            }
        }
        for (std::size_t nt = 0; nt < e.bw.size(); ++nt) {
            if (e.bw[nt] && (*e.bw[nt] >= p.fw.size() || p.fw[*e.bw[nt]] != nt)) {
                throw InvariantViolation("backward link without matching forward link at step " +
                                         std::to_string(e.step));
            }
        }
    }
    if (!entries_.empty()) {
        for (const SlotLink& l : entries_.back().fw) {
            if (l) {
                throw InvariantViolation("newest entry has a forward link");
            }
        }
    }
}

// ---- ordering ----

double track_importance(const Track& t, const ImportanceConfig& cfg) {
    const Point3 v = velocity_of(t.kf);
    return importance_score(t.obs, cfg, std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z));
}

std::vector<Track> merge_sorted(std::vector<Track> a, std::vector<Track> b,
                                const ImportanceConfig& cfg) {
    return merge_sorted(std::move(a), std::move(b),
                        [&](const Track& t) { return track_importance(t, cfg); });
}

// ---- Tracker ----

Tracker::Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

const std::vector<Track>& Tracker::tracks() const {
    static const std::vector<Track> kNone;
    return ring_.empty() ? kNone : ring_.newest().tracks;
}

Track Tracker::make_track(const TargetObservation& obs) {
    Track t;
    t.track_id = next_id_++;
    max_issued_id_ = t.track_id;
    t.state = TrackState::New;
    t.bad_count = 0;
    t.age = 1;
    t.obs = obs;
    t.centroid = obs.centroid;
    t.bbox = obs.bbox;
    t.kf = kf_init(obs.centroid, cfg_.kalman);
    t.box_kf = box_kf_init(obs.bbox, cfg_.kalman);
    t.features = compute_features(t, nullptr);
    return t;
}

const std::vector<Track>& Tracker::step(std::span<const TargetObservation> observations) {
    if (observations.size() > cfg_.t_max) {
        throw ConfigViolation("step received " + std::to_string(observations.size()) +
                              " observations, t_max is " + std::to_string(cfg_.t_max));
    }
    report_ = StepReport{};
    report_.step = next_step_;

    static const std::vector<Track> kNone;
    const std::vector<Track>& prev = ring_.empty() ? kNone : ring_.newest().tracks;

    std::vector<AssociationCandidate> candidates;
    candidates.reserve(prev.size());
    for (const Track& t : prev) {
        candidates.push_back(predict_candidate(t, cfg_.assoc));
    }
    const AssociationMatrix m = build_association_matrix(
        std::span<const AssociationCandidate>(candidates), observations, cfg_.assoc);
    const MatchSet matches = resolve_matches(m);
    report_.matched = matches.matched();

    std::vector<Track> survivors;
    std::map<std::uint64_t, std::size_t> prev_slot;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        const Track& before = prev[i];
        const AssociationCandidate& cand = candidates[i];
        Track t = before;
        if (matches.fw[i]) {
            const TargetObservation& o = observations[*matches.fw[i]];
            t.state = before.state == TrackState::Coasting ? TrackState::Reacquired
                                                           : TrackState::Matched;
            t.bad_count = 0;
            t.kf = kf_update(cand.kf, o.centroid);
            t.box_kf = box_kf_update(cand.box_kf, o.bbox);
            t.obs = o;
            t.centroid = o.centroid;
            t.bbox = o.bbox;
        } else if (before.bad_count < cfg_.max_coast) {
            t.state = TrackState::Coasting;
            t.bad_count = before.bad_count + 1;
            t.kf = cand.kf;
            t.box_kf = cand.box_kf;
            t.centroid = cand.centroid;
            if (cfg_.assoc.mode == AssociationMode::KalmanBBox) {
                t.bbox = cand.bbox;
            } else {
                const Voxel shift{static_cast<int>(std::lround(t.centroid.x - t.obs.centroid.x)),
                                  static_cast<int>(std::lround(t.centroid.y - t.obs.centroid.y)),
                                  static_cast<int>(std::lround(t.centroid.z - t.obs.centroid.z))};
                t.bbox = {{t.obs.bbox.min.x + shift.x, t.obs.bbox.min.y + shift.y,
                           t.obs.bbox.min.z + shift.z},
                          {t.obs.bbox.max.x + shift.x, t.obs.bbox.max.y + shift.y,
                           t.obs.bbox.max.z + shift.z}};
            }
        } else {
            ++report_.lost;
            continue;
        }
        ++t.age;
        t.features = compute_features(t, &before);
        prev_slot[t.track_id] = i;
        survivors.push_back(std::move(t));
    }

    std::vector<Track> fresh;
    for (std::size_t j = 0; j < observations.size(); ++j) {
        if (!matches.bw[j]) {
            fresh.push_back(make_track(observations[j]));
        }
    }

    // Matched tracks carry new volumes, so their order may have changed.
    auto score = [&](const Track& t) { return track_importance(t, cfg_.importance); };
    std::stable_sort(survivors.begin(), survivors.end(),
                     [&](const Track& a, const Track& b) { return score(a) > score(b); });
    std::stable_sort(fresh.begin(), fresh.end(),
                     [&](const Track& a, const Track& b) { return score(a) > score(b); });

    std::vector<Track> merged = merge_sorted(std::move(survivors), std::move(fresh), score);
    report_.merged = merged.size();
    report_.truncated = truncate_targets(merged, cfg_.t_max);

    HistoryEntry entry;
    entry.step = next_step_;
    entry.fw.assign(merged.size(), std::nullopt);
    entry.bw.assign(merged.size(), std::nullopt);
    for (std::size_t nt = 0; nt < merged.size(); ++nt) {
        const Track& t = merged[nt];
        if (t.state == TrackState::Matched || t.state == TrackState::Reacquired) {
            const std::size_t mt = prev_slot.at(t.track_id);
            entry.bw[nt] = mt;
            ring_.newest().fw[mt] = nt;
        }
    }
    entry.tracks = std::move(merged);
    ring_.push(std::move(entry));
    ++next_step_;
    return ring_.newest().tracks;
}

void Tracker::check_invariants() const {
    ring_.check_consistency();
    if (report_.merged > 2 * cfg_.t_max) {
        throw InvariantViolation("merged list exceeds 2 * t_max");
    }
    std::set<std::uint64_t> ids;
    for (const Track& t : tracks()) {
        if (!ids.insert(t.track_id).second) {
            throw InvariantViolation("duplicate track id " + std::to_string(t.track_id));
        }
        if (t.track_id == 0 || t.track_id > max_issued_id_) {
            throw InvariantViolation("track id never issued");
        }
        if ((t.bad_count >= 1) != (t.state == TrackState::Coasting) ||
            t.bad_count > cfg_.max_coast || t.age < 1) {
            throw InvariantViolation("track " + std::to_string(t.track_id) +
                                     " has inconsistent coasting state");
        }
    }
    if (tracks().size() > cfg_.t_max) {
        throw InvariantViolation("track list exceeds t_max");
    }
}

// ---- trajectory reconstruction ----

std::vector<StepSlot> reconstruct_forward(const HistoryRing& ring, std::size_t start_step,
                                          std::size_t slot) {
    const HistoryEntry* e = ring.find(start_step);
    if (!e) {
        throw EntryEvicted("step " + std::to_string(start_step) + " is not in the history ring");
    }
    if (slot >= e->tracks.size()) {
        throw std::out_of_range("slot " + std::to_string(slot) + " out of range");
    }
    std::vector<StepSlot> chain{{start_step, slot}};
    while (e->fw[slot]) {
        const HistoryEntry* next = ring.find(e->step + 1);
        if (!next) {
            break;
        }
        slot = *e->fw[slot];
        e = next;
        chain.push_back({e->step, slot});
    }
    return chain;
}

std::vector<StepSlot> reconstruct_backward(const HistoryRing& ring, std::size_t end_step,
                                           std::size_t slot) {
    const HistoryEntry* e = ring.find(end_step);
    if (!e) {
        throw EntryEvicted("step " + std::to_string(end_step) + " is not in the history ring");
    }
    if (slot >= e->tracks.size()) {
        throw std::out_of_range("slot " + std::to_string(slot) + " out of range");
    }
    std::vector<StepSlot> chain{{end_step, slot}};
    while (e->bw[slot] && e->step > 0) {
        const HistoryEntry* prev = ring.find(e->step - 1);
        if (!prev) {
            break;
        }
        slot = *e->bw[slot];
        e = prev;
        chain.push_back({e->step, slot});
    }
    return chain;
}

}  // namespace ladar
