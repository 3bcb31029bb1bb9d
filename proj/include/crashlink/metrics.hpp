// Per-trial outcome records and the three pipeline accuracy ratios.
//
// Each accuracy is hits / (hits + misses) over the same trial set, so the
// per-metric counts always sum to the number of trials. Reports keep the
// raw counts, which makes merging two reports plain addition.
#pragma once

#include <span>

#include "crashlink/result.hpp"

namespace crashlink::metrics {

struct TrialRecord {
    int place_no = 0;       // unique label within one trial set
    bool detected = false;  // accident event raised
    bool located = false;   // fresh position attached
    bool notified = false;  // every attempted delivery succeeded
    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct AccuracyReport {
    int detect_hits = 0;
    int detect_misses = 0;
    int locate_hits = 0;
    int locate_misses = 0;
    int notify_hits = 0;
    int notify_misses = 0;

    int trials() const { return detect_hits + detect_misses; }

    // Ratios require at least one trial.
    double detection_accuracy() const;
    double location_accuracy() const;
    double notification_accuracy() const;

    friend bool operator==(const AccuracyReport&, const AccuracyReport&) = default;
};

// EmptyTrials for an empty span; DuplicatePlace when two records share a
// place number.
Result<AccuracyReport> accumulate(std::span<const TrialRecord> trials);

// Counts add fieldwise. Merging is commutative and associative with the
// zero report as identity, so partial reports can be combined in any order.
AccuracyReport merge(const AccuracyReport& a, const AccuracyReport& b);

}  // namespace crashlink::metrics
