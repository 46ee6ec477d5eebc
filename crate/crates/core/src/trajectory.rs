//! Trajectory logs: line-delimited rollout records with a self-describing
//! header, plus replay verification.
//!
//! File layout (one JSON document per line):
//!   1. header — format version, layout (name + full text), seed, seats
//!   2. one record per tick — tick, both observations, both primitive
//!      actions, shared reward, events
//!   3. footer — macro labels per seat and the final score
//!
//! A trajectory is replayable: rebuilding the environment from the header
//! and applying the recorded actions must reproduce observations, rewards,
//! events, and score exactly.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::env::{
    label_events, observe, Event, GameState, Layout, MacroAction, PrimitiveAction,
    LAYOUT_FORMAT_VERSION,
};
use crate::error::{Error, Result};

pub const TRAJ_FORMAT: &str = "talents-traj";
pub const TRAJ_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryHeader {
    pub format: String,
    pub version: u32,
    pub layout: String,
    pub layout_version: u32,
    /// Full layout text so replays never depend on external files.
    pub layout_text: String,
    pub seed: u64,
    pub episode_ticks: u32,
    /// Source policy tags for seats 0 and 1 (e.g. `bp-3`, `talents`, `human`).
    pub policy_ids: [String; 2],
    /// Competence (path-noise) levels for scripted seats, 0.0 otherwise.
    pub competence: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub t: u32,
    pub obs: [Vec<f64>; 2],
    pub actions: [PrimitiveAction; 2],
    pub reward: i32,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Footer {
    macros: [Vec<(u32, MacroAction)>; 2],
    score: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub header: TrajectoryHeader,
    pub steps: Vec<TickRecord>,
    pub macros: [Vec<(u32, MacroAction)>; 2],
    pub score: i32,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn write_jsonl(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let mut line = serde_json::to_string(&self.header)?;
        line.push('\n');
        w.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
        for step in &self.steps {
            let mut line = serde_json::to_string(step)?;
            line.push('\n');
            w.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
        }
        let footer = Footer {
            macros: self.macros.clone(),
            score: self.score,
        };
        let mut line = serde_json::to_string(&footer)?;
        line.push('\n');
        w.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn read_jsonl(path: &Path) -> Result<Trajectory> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::Format(format!("{}: empty trajectory", path.display())))?
            .map_err(|e| Error::io(path, e))?;
        let header: TrajectoryHeader = serde_json::from_str(&header_line)?;
        if header.format != TRAJ_FORMAT || header.version != TRAJ_VERSION {
            return Err(Error::Format(format!(
                "{}: unsupported trajectory format {} v{}",
                path.display(),
                header.format,
                header.version
            )));
        }
        let mut steps = Vec::new();
        let mut footer: Option<Footer> = None;
        for line in lines {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            // The footer is the only line without a `t` field.
            match serde_json::from_str::<TickRecord>(&line) {
                Ok(rec) => steps.push(rec),
                Err(_) => {
                    footer = Some(serde_json::from_str::<Footer>(&line)?);
                }
            }
        }
        let footer = footer
            .ok_or_else(|| Error::Format(format!("{}: missing footer", path.display())))?;
        Ok(Trajectory {
            header,
            steps,
            macros: footer.macros,
            score: footer.score,
        })
    }

    /// Recompute macro labels from the recorded event stream.
    ///
    /// Fails with a format error if the trajectory was recorded against a
    /// different layout format version than this build understands.
    pub fn label_macro_actions(&self) -> Result<[Vec<(u32, MacroAction)>; 2]> {
        if self.header.layout_version != LAYOUT_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "trajectory layout version {} does not match supported version {}",
                self.header.layout_version, LAYOUT_FORMAT_VERSION
            )));
        }
        let events: Vec<Vec<Event>> = self.steps.iter().map(|s| s.events.clone()).collect();
        Ok([label_events(&events, 0), label_events(&events, 1)])
    }

    /// Replay the recorded actions from the header seed and verify that
    /// observations, rewards, events, and score reproduce exactly.
    pub fn verify_replay(&self) -> Result<()> {
        let layout = Layout::parse(&self.header.layout_text)?;
        let mut state =
            GameState::new(&layout, self.header.seed).with_episode_ticks(self.header.episode_ticks);
        let mut score = 0i32;
        for rec in &self.steps {
            let expect_obs = [observe(&state, 0), observe(&state, 1)];
            if expect_obs != rec.obs {
                return Err(Error::Format(format!(
                    "replay diverged at tick {}: observations differ",
                    rec.t
                )));
            }
            let (reward, events) = state.step(rec.actions);
            if reward[0] != rec.reward || events != rec.events {
                return Err(Error::Format(format!(
                    "replay diverged at tick {}: reward/events differ",
                    rec.t
                )));
            }
            score += reward[0];
        }
        if score != self.score {
            return Err(Error::Format(format!(
                "replay score {} does not match recorded {}",
                score, self.score
            )));
        }
        Ok(())
    }
}

/// Incremental builder used by rollout loops: records pre-step observations,
/// the joint action, and the step outcome; finishes with macro labels.
pub struct TrajectoryRecorder {
    header: TrajectoryHeader,
    steps: Vec<TickRecord>,
    score: i32,
}

impl TrajectoryRecorder {
    pub fn new(
        layout: &Layout,
        seed: u64,
        episode_ticks: u32,
        policy_ids: [String; 2],
        competence: [f64; 2],
    ) -> TrajectoryRecorder {
        TrajectoryRecorder {
            header: TrajectoryHeader {
                format: TRAJ_FORMAT.to_string(),
                version: TRAJ_VERSION,
                layout: layout.name.clone(),
                layout_version: layout.version,
                layout_text: layout.to_text(),
                seed,
                episode_ticks,
                policy_ids,
                competence,
            },
            steps: Vec::new(),
            score: 0,
        }
    }

    pub fn push(
        &mut self,
        tick: u32,
        obs: [Vec<f64>; 2],
        actions: [PrimitiveAction; 2],
        reward: i32,
        events: Vec<Event>,
    ) {
        self.score += reward;
        self.steps.push(TickRecord {
            t: tick,
            obs,
            actions,
            reward,
            events,
        });
    }

    pub fn finish(self) -> Trajectory {
        let events: Vec<Vec<Event>> = self.steps.iter().map(|s| s.events.clone()).collect();
        let macros = [label_events(&events, 0), label_events(&events, 1)];
        Trajectory {
            header: self.header,
            steps: self.steps,
            macros,
            score: self.score,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{layout, ACTION_COUNT};
    use crate::rng;
    use rand::Rng;

    fn random_trajectory(seed: u64, ticks: u32) -> Trajectory {
        let layout = layout::builtin("open").unwrap();
        let mut state = GameState::new(&layout, seed).with_episode_ticks(ticks);
        let mut rec = TrajectoryRecorder::new(
            &layout,
            seed,
            ticks,
            ["rand-0".into(), "rand-1".into()],
            [0.0, 0.0],
        );
        let mut r = rng::rng(seed, 10);
        for t in 0..ticks {
            let obs = [observe(&state, 0), observe(&state, 1)];
            let actions = [
                PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)],
                PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)],
            ];
            let (reward, events) = state.step(actions);
            rec.push(t, obs, actions, reward[0], events);
        }
        rec.finish()
    }

    #[test]
    fn round_trips_and_replays() {
        let traj = random_trajectory(5, 120);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        traj.write_jsonl(&path).unwrap();
        let loaded = Trajectory::read_jsonl(&path).unwrap();
        assert_eq!(traj, loaded);
        loaded.verify_replay().unwrap();
    }

    #[test]
    fn labels_match_stored_macros() {
        let traj = random_trajectory(6, 200);
        let relabeled = traj.label_macro_actions().unwrap();
        assert_eq!(relabeled, traj.macros);
    }

    #[test]
    fn version_mismatch_is_format_error() {
        let mut traj = random_trajectory(7, 50);
        traj.header.layout_version = 999;
        assert!(matches!(
            traj.label_macro_actions(),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn tampered_reward_fails_replay() {
        let mut traj = random_trajectory(8, 80);
        traj.steps[40].reward += 1;
        assert!(traj.verify_replay().is_err());
    }
}
