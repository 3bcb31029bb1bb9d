#include "crashlink/metrics.hpp"

#include <cassert>
#include <set>
#include <string>

namespace crashlink::metrics {

double AccuracyReport::detection_accuracy() const {
    assert(trials() > 0);
    return static_cast<double>(detect_hits) / (detect_hits + detect_misses);
}

double AccuracyReport::location_accuracy() const {
    assert(trials() > 0);
    return static_cast<double>(locate_hits) / (locate_hits + locate_misses);
}

double AccuracyReport::notification_accuracy() const {
    assert(trials() > 0);
    return static_cast<double>(notify_hits) / (notify_hits + notify_misses);
}

Result<AccuracyReport> accumulate(std::span<const TrialRecord> trials) {
    if (trials.empty()) {
        return Error{ErrCode::EmptyTrials, "no trial records to accumulate"};
    }
    std::set<int> seen;
    AccuracyReport report;
    for (const auto& trial : trials) {
        if (!seen.insert(trial.place_no).second) {
            return Error{ErrCode::DuplicatePlace,
                         "duplicate place number: " + std::to_string(trial.place_no)};
        }
        (trial.detected ? report.detect_hits : report.detect_misses) += 1;
        (trial.located ? report.locate_hits : report.locate_misses) += 1;
        (trial.notified ? report.notify_hits : report.notify_misses) += 1;
    }
    return report;
}

AccuracyReport merge(const AccuracyReport& a, const AccuracyReport& b) {
    AccuracyReport out;
    out.detect_hits = a.detect_hits + b.detect_hits;
    out.detect_misses = a.detect_misses + b.detect_misses;
    out.locate_hits = a.locate_hits + b.locate_hits;
    out.locate_misses = a.locate_misses + b.locate_misses;
    out.notify_hits = a.notify_hits + b.notify_hits;
    out.notify_misses = a.notify_misses + b.notify_misses;
    return out;
}

}  // namespace crashlink::metrics
