use std::collections::BTreeMap;

use serde::Serialize;

/// Empirical metrics over the measured slots of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub pe_hat: f64,
    pub cost_hat: f64,
    pub sampling_rate: f64,
    /// Maximal runs of erroneous slots: length → count. A run still open at
    /// the end of the horizon is counted at its truncated length.
    pub consec_hist: BTreeMap<u64, u64>,
    /// Maximal runs of `(X, X̂) = (1, 0)` slots.
    pub importance_hist: BTreeMap<u64, u64>,
    pub slots: u64,
    pub error_slots: u64,
    pub sample_slots: u64,
    pub seed: u64,
}

/// Slot-wise statistics of a run-length histogram.
fn slot_pmf(hist: &BTreeMap<u64, u64>, slots: u64, i: u64) -> f64 {
    if i == 0 {
        let in_runs: u64 = hist.iter().map(|(l, n)| l * n).sum();
        return 1.0 - in_runs as f64 / slots as f64;
    }
    // A run of length L contains exactly one slot with counter value i for
    // every i <= L.
    let count: u64 = hist.range(i..).map(|(_, n)| n).sum();
    count as f64 / slots as f64
}

fn slot_mean(hist: &BTreeMap<u64, u64>, slots: u64) -> f64 {
    let total: f64 = hist.iter().map(|(&l, &n)| n as f64 * (l * (l + 1) / 2) as f64).sum();
    total / slots as f64
}

impl SimReport {
    /// Fraction of measured slots with `C_E(t) = i`.
    pub fn consec_slot_pmf(&self, i: u64) -> f64 {
        slot_pmf(&self.consec_hist, self.slots, i)
    }

    /// Slot average of `C_E(t)`.
    pub fn mean_consec_error(&self) -> f64 {
        slot_mean(&self.consec_hist, self.slots)
    }

    /// Fraction of measured slots with `C_S(t) = i`.
    pub fn importance_slot_pmf(&self, i: u64) -> f64 {
        slot_pmf(&self.importance_hist, self.slots, i)
    }

    /// Slot average of `C_S(t)`.
    pub fn mean_importance_consec(&self) -> f64 {
        slot_mean(&self.importance_hist, self.slots)
    }

    /// Fraction of measured slots with `C_E(t) > n`.
    pub fn violation_hat(&self, n: u64) -> f64 {
        let count: u64 = self.consec_hist.range(n + 1..).map(|(&l, &c)| c * (l - n)).sum();
        count as f64 / self.slots as f64
    }
}

/// Time-averaged sampling cost `delta * sampling_rate`.
pub fn empirical_sampling_cost(report: &SimReport, delta: f64) -> f64 {
    delta * report.sampling_rate
}

#[derive(Default)]
pub(super) struct Accumulator {
    slots: u64,
    errors: u64,
    samples: u64,
    cost: f64,
    run_e: u64,
    run_s: u64,
    consec: BTreeMap<u64, u64>,
    importance: BTreeMap<u64, u64>,
}

fn close_run(hist: &mut BTreeMap<u64, u64>, run: &mut u64) {
    if *run > 0 {
        *hist.entry(*run).or_insert(0) += 1;
        *run = 0;
    }
}

impl Accumulator {
    pub(super) fn record(&mut self, sampled: bool, error: bool, important: bool, cost: f64) {
        self.slots += 1;
        self.samples += u64::from(sampled);
        self.cost += cost;
        if error {
            self.errors += 1;
            self.run_e += 1;
        } else {
            close_run(&mut self.consec, &mut self.run_e);
        }
        if important {
            self.run_s += 1;
        } else {
            close_run(&mut self.importance, &mut self.run_s);
        }
    }

    pub(super) fn finish(mut self, seed: u64) -> SimReport {
        close_run(&mut self.consec, &mut self.run_e);
        close_run(&mut self.importance, &mut self.run_s);
        let n = self.slots as f64;
        SimReport {
            pe_hat: self.errors as f64 / n,
            cost_hat: self.cost / n,
            sampling_rate: self.samples as f64 / n,
            consec_hist: self.consec,
            importance_hist: self.importance,
            slots: self.slots,
            error_slots: self.errors,
            sample_slots: self.samples,
            seed,
        }
    }
}
