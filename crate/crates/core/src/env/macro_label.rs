//! Macro-action labeling over event streams.
//!
//! One label per completed high-level event, plus an `Idle` label for every
//! full idle window without one. The same tracker drives both offline
//! trajectory labeling and the online partner-macro observation used by the
//! adaptation loop, so the two can never diverge.

use super::action::MacroAction;
use super::events::Event;

/// Event-free ticks before an `Idle` label is emitted.
pub const IDLE_THRESHOLD_TICKS: u32 = 20;

/// Incremental per-seat macro labeler.
#[derive(Debug, Clone, Default)]
pub struct MacroTracker {
    idle_run: u32,
}

impl MacroTracker {
    pub fn new() -> MacroTracker {
        MacroTracker::default()
    }

    /// Feed one tick's events; returns the macro completed by `seat` this
    /// tick, if any. At most one player interact resolves per tick, so at
    /// most one label results.
    pub fn observe(&mut self, events: &[Event], seat: usize) -> Option<MacroAction> {
        let label = events
            .iter()
            .filter(|e| e.player() == Some(seat))
            .find_map(|e| e.macro_label());
        match label {
            Some(m) => {
                self.idle_run = 0;
                Some(m)
            }
            None => {
                self.idle_run += 1;
                if self.idle_run >= IDLE_THRESHOLD_TICKS {
                    self.idle_run = 0;
                    Some(MacroAction::Idle)
                } else {
                    None
                }
            }
        }
    }
}

/// Label a full per-tick event stream for one seat. Output is
/// `(tick, macro)` pairs ordered by tick.
pub fn label_events(per_tick_events: &[Vec<Event>], seat: usize) -> Vec<(u32, MacroAction)> {
    let mut tracker = MacroTracker::new();
    let mut out = Vec::new();
    for (tick, events) in per_tick_events.iter().enumerate() {
        if let Some(m) = tracker.observe(events, seat) {
            out.push((tick as u32, m));
        }
    }
    out
}
