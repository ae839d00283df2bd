#include "ladartrack/pipeline.hpp"

#include <exception>
#include <thread>

namespace ladar {

StepInput AcquisitionStage::process(const FrameGroup& group) {
    StepInput in;
    in.step = group.group_index;
    in.grid = build_histogram(group, cfg_.sensor);
    ThresholdResult t = denoise(in.grid, cfg_.denoise, t_prev_);
    t_prev_ = t.threshold;
    in.threshold = t.threshold;
    const Labeling labeling = label_components(t.mask, cfg_.connectivity);
    in.components = labeling.count;
    in.observations = importance_sort(extract_observations(labeling.labels, in.grid.counts),
                                      cfg_.tracker.importance);
    truncate_targets(in.observations, cfg_.tracker.t_max);
    return in;
}

void run_pipeline(RawFileReader& reader, const RunConfig& cfg, const StepCallback& on_step,
                  std::size_t queue_depth) {
    cfg.validate();
    Tracker tracker(cfg.tracker);
    BoundedQueue<StepInput> queue(queue_depth);
    std::exception_ptr producer_error;

    std::thread producer([&] {
        try {
            AcquisitionStage stage(cfg);
            for (std::size_t g = 0; g < reader.group_count(); ++g) {
                queue.push(stage.process(reader.read_group(g)));
            }
        } catch (...) {
            producer_error = std::current_exception();
        }
        queue.close();
    });

    try {
        while (auto in = queue.pop()) {
            tracker.step(in->observations);
            tracker.check_invariants();
            on_step(*in, tracker);
        }
    } catch (...) {
        queue.close();
        producer.join();
        throw;
    }
    producer.join();
    if (producer_error) {
        std::rethrow_exception(producer_error);
    }
}

}  // namespace ladar
