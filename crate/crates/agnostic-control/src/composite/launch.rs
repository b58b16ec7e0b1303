use crate::error::SimResult;
use crate::history::LocalHistory;
use crate::strategy::Controller;
use crate::trajectory::CrossingRecord;

/// A child controller launched mid-game: the past is forgotten and its clock
/// restarts at the entry time. The launcher feeds it re-based observations
/// and shifts its recorded events back into the parent clock.
pub(crate) struct Launched {
    ctl: Box<dyn Controller>,
    entry_time: f64,
    local: LocalHistory,
}

impl Launched {
    pub fn new(ctl: Box<dyn Controller>, entry_time: f64) -> Self {
        Launched {
            ctl,
            entry_time,
            local: LocalHistory::new(),
        }
    }

    pub fn step(&mut self, t: f64, q: f64) -> SimResult<f64> {
        self.local.push(t - self.entry_time, q);
        self.ctl.control(&self.local.view())
    }

    pub fn drain_events(&mut self) -> Vec<CrossingRecord> {
        self.ctl
            .drain_events()
            .into_iter()
            .map(|mut e| {
                e.time += self.entry_time;
                e
            })
            .collect()
    }
}
