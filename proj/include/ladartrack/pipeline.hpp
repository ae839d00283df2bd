#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <vector>

#include "ladartrack/denoise.hpp"
#include "ladartrack/labeling.hpp"
#include "ladartrack/raw_ingest.hpp"
#include "ladartrack/run_config.hpp"
#include "ladartrack/track_manager.hpp"
#include "ladartrack/voxelizer.hpp"

namespace ladar {

/// Per-step output of the acquisition stages, ready for the tracker.
struct StepInput {
    std::size_t step = 0;
    VoxelGrid grid;
    std::vector<TargetObservation> observations;  ///< sorted, at most t_max
    double threshold = 0.0;
    std::size_t components = 0;  ///< before truncation
};

/// voxelize -> denoise -> label -> sort -> truncate. Stateful only through
/// the moving-average threshold, so groups must be fed in order.
class AcquisitionStage {
public:
    explicit AcquisitionStage(const RunConfig& cfg) : cfg_(cfg) {}

    StepInput process(const FrameGroup& group);

private:
    RunConfig cfg_;
    std::optional<double> t_prev_;
};

/// Fixed-capacity FIFO between one producer and one consumer.
template <class T>
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

    void push(T value) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
        if (closed_) {
            return;
        }
        items_.push_back(std::move(value));
        not_empty_.notify_one();
    }

    /// Empty optional once the queue is closed and drained.
    std::optional<T> pop() {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
        if (items_.empty()) {
            return std::nullopt;
        }
        T value = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return value;
    }

    void close() {
        std::lock_guard lock(mutex_);
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

private:
    std::size_t capacity_;
    std::deque<T> items_;
    bool closed_ = false;
    std::mutex mutex_;
    std::condition_variable not_empty_;
    std::condition_variable not_full_;
};

using StepCallback = std::function<void(const StepInput&, const Tracker&)>;

/// Run acquisition on a worker thread ahead of the tracker, delivering steps
/// in order through a bounded queue. Exceptions from either side propagate.
void run_pipeline(RawFileReader& reader, const RunConfig& cfg, const StepCallback& on_step,
                  std::size_t queue_depth = 4);

}  // namespace ladar
