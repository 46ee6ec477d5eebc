//! Rollout collection over all policy pairs and the on-disk dataset index.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BehaviorPreference, ScriptedPolicy, COMPETENCE_LEVELS};
use crate::env::{observe, GameState, Layout};
use crate::error::{Error, Result};
use crate::rng;
use crate::trajectory::{Trajectory, TrajectoryRecorder};

#[derive(Debug, Clone)]
pub struct CollectConfig {
    pub layouts: Vec<String>,
    pub episodes_per_pair: usize,
    pub episode_ticks: Option<u32>,
    /// Competence (path-noise) levels sampled per seat per episode.
    pub competence_levels: Vec<f64>,
    pub seed: u64,
}

impl Default for CollectConfig {
    fn default() -> Self {
        CollectConfig {
            layouts: vec!["open".into()],
            episodes_per_pair: 1,
            episode_ticks: None,
            competence_levels: COMPETENCE_LEVELS.to_vec(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolicyMeta {
    pub id: u32,
    pub pref: BehaviorPreference,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub file: String,
    pub layout: String,
    pub seed: u64,
    pub policy_ids: [u32; 2],
    pub competence: [f64; 2],
    pub episode: usize,
    pub score: i32,
    pub ticks: u32,
}

/// Index of a collected dataset; the lightweight handle everything else
/// loads trajectories through.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetIndex {
    pub version: u32,
    pub layouts: Vec<String>,
    pub policies: Vec<PolicyMeta>,
    pub trajectories: Vec<TrajectoryMeta>,
    #[serde(skip)]
    pub root: PathBuf,
}

impl DatasetIndex {
    pub const FILE_NAME: &'static str = "index.json";

    pub fn save(&self, dir: &Path) -> Result<()> {
        let path = dir.join(Self::FILE_NAME);
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, json).map_err(|e| Error::io(&path, e))
    }

    pub fn load(dir: &Path) -> Result<DatasetIndex> {
        let path = dir.join(Self::FILE_NAME);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let mut index: DatasetIndex = serde_json::from_str(&text)?;
        index.root = dir.to_path_buf();
        Ok(index)
    }

    pub fn trajectory_path(&self, meta: &TrajectoryMeta) -> PathBuf {
        self.root.join(&meta.file)
    }

    pub fn load_trajectory(&self, meta: &TrajectoryMeta) -> Result<Trajectory> {
        Trajectory::read_jsonl(&self.trajectory_path(meta))
    }
}

/// Run one episode between two scripted policies and record it.
pub fn rollout_episode(
    layout: &Layout,
    p0: &ScriptedPolicy,
    p1: &ScriptedPolicy,
    episode_seed: u64,
    episode_ticks: Option<u32>,
) -> Trajectory {
    let ticks = episode_ticks.unwrap_or(layout.episode_ticks);
    let mut state = GameState::new(layout, episode_seed).with_episode_ticks(ticks);
    let mut a = p0.clone();
    let mut b = p1.clone();
    a.reset(rng::mix(episode_seed, 0));
    b.reset(rng::mix(episode_seed, 1));
    let mut rec = TrajectoryRecorder::new(
        layout,
        episode_seed,
        ticks,
        [format!("bp-{}", p0.id), format!("bp-{}", p1.id)],
        [p0.eps, p1.eps],
    );
    for t in 0..ticks {
        let obs = [observe(&state, 0), observe(&state, 1)];
        let actions = [a.act(&state, 0), b.act(&state, 1)];
        let (reward, events) = state.step(actions);
        rec.push(t, obs, actions, reward[0], events);
    }
    rec.finish()
}

/// Collect episodes for every unordered policy pair (self-pairs included)
/// on every layout, write trajectory files under `out_dir`, and return the
/// saved index. Rollouts fan out across workers; writes are serialized.
pub fn collect_rollouts(
    policies: &[ScriptedPolicy],
    cfg: &CollectConfig,
    out_dir: &Path,
) -> Result<DatasetIndex> {
    if policies.len() < 2 {
        return Err(Error::Config("need at least 2 policies".into()));
    }
    if cfg.layouts.is_empty() || cfg.episodes_per_pair == 0 {
        return Err(Error::Config("no layouts or zero episodes per pair".into()));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let layouts: Vec<Layout> = cfg
        .layouts
        .iter()
        .map(|name| crate::env::layout::load(name))
        .collect::<Result<_>>()?;

    // Episode specs in deterministic order.
    struct Spec {
        i: usize,
        j: usize,
        layout_idx: usize,
        episode: usize,
        seed: u64,
        competence: [f64; 2],
    }
    let mut specs = Vec::new();
    for i in 0..policies.len() {
        for j in i..policies.len() {
            for (layout_idx, _) in layouts.iter().enumerate() {
                for episode in 0..cfg.episodes_per_pair {
                    let tag = ((i * policies.len() + j) as u64) << 20
                        | (layout_idx as u64) << 10
                        | episode as u64;
                    let seed = rng::mix(cfg.seed, tag);
                    let levels = &cfg.competence_levels;
                    let competence = if levels.is_empty() {
                        [0.0, 0.0]
                    } else {
                        let pick = rng::mix(seed, 0xeb5) as usize;
                        [
                            levels[pick % levels.len()],
                            levels[(pick / levels.len()) % levels.len()],
                        ]
                    };
                    specs.push(Spec {
                        i,
                        j,
                        layout_idx,
                        episode,
                        seed,
                        competence,
                    });
                }
            }
        }
    }

    let results: Vec<(usize, Trajectory)> = specs
        .par_iter()
        .enumerate()
        .map(|(n, spec)| {
            let p0 = policies[spec.i].clone().with_competence(spec.competence[0]);
            let p1 = policies[spec.j].clone().with_competence(spec.competence[1]);
            let layout = &layouts[spec.layout_idx];
            (n, rollout_episode(layout, &p0, &p1, spec.seed, cfg.episode_ticks))
        })
        .collect();

    let mut trajectories = Vec::with_capacity(results.len());
    let mut written: Vec<PathBuf> = Vec::new();
    let mut write_all = || -> Result<()> {
        for (n, traj) in &results {
            let spec = &specs[*n];
            let file = format!("traj_{n:05}.jsonl");
            let path = out_dir.join(&file);
            traj.write_jsonl(&path)?;
            written.push(path);
            trajectories.push(TrajectoryMeta {
                file,
                layout: traj.header.layout.clone(),
                seed: spec.seed,
                policy_ids: [policies[spec.i].id, policies[spec.j].id],
                competence: spec.competence,
                episode: spec.episode,
                score: traj.score,
                ticks: traj.len() as u32,
            });
        }
        Ok(())
    };
    if let Err(e) = write_all() {
        // Partial-index cleanup: drop whatever this run managed to write.
        for path in written {
            let _ = std::fs::remove_file(path);
        }
        return Err(e);
    }

    let index = DatasetIndex {
        version: 1,
        layouts: cfg.layouts.clone(),
        policies: policies
            .iter()
            .map(|p| PolicyMeta {
                id: p.id,
                pref: p.pref,
            })
            .collect(),
        trajectories,
        root: out_dir.to_path_buf(),
    };
    index.save(out_dir)?;
    Ok(index)
}

/// Split an index by source-policy ids: no trajectory that used a held-out
/// policy in either seat stays in the train set.
pub fn holdout_split(
    index: &DatasetIndex,
    holdout_policy_ids: &[u32],
) -> Result<(DatasetIndex, DatasetIndex)> {
    let known: Vec<u32> = index.policies.iter().map(|p| p.id).collect();
    for id in holdout_policy_ids {
        if !known.contains(id) {
            return Err(Error::Config(format!(
                "holdout policy id {id} not present in the dataset"
            )));
        }
    }
    let mut train = index.clone();
    let mut holdout = index.clone();
    train.trajectories.retain(|t| {
        !t.policy_ids.iter().any(|id| holdout_policy_ids.contains(id))
    });
    holdout
        .trajectories
        .retain(|t| t.policy_ids.iter().any(|id| holdout_policy_ids.contains(id)));
    if train.trajectories.is_empty() {
        return Err(Error::Config(
            "holdout split leaves an empty train set".into(),
        ));
    }
    Ok((train, holdout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::MacroAction;
    use crate::partner::make_population;

    fn small_dataset(dir: &Path) -> DatasetIndex {
        let pop = make_population(3, 5).unwrap();
        let cfg = CollectConfig {
            layouts: vec!["open".into()],
            episodes_per_pair: 1,
            episode_ticks: Some(200),
            competence_levels: vec![0.0],
            seed: 42,
        };
        collect_rollouts(&pop, &cfg, dir).unwrap()
    }

    #[test]
    fn pair_counting_includes_self_pairs() {
        let dir = tempfile::tempdir().unwrap();
        let index = small_dataset(dir.path());
        // 3 choose 2 + 3 self-pairs = 6.
        assert_eq!(index.trajectories.len(), 6);
    }

    #[test]
    fn collected_trajectories_replay_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let index = small_dataset(dir.path());
        for meta in &index.trajectories {
            let traj = index.load_trajectory(meta).unwrap();
            traj.verify_replay().unwrap();
            assert_eq!(traj.score, meta.score);
        }
    }

    #[test]
    fn collection_is_deterministic() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let i1 = small_dataset(d1.path());
        let i2 = small_dataset(d2.path());
        for (a, b) in i1.trajectories.iter().zip(&i2.trajectories) {
            assert_eq!(a.score, b.score);
            assert_eq!(a.seed, b.seed);
            let t1 = i1.load_trajectory(a).unwrap();
            let t2 = i2.load_trajectory(b).unwrap();
            assert_eq!(t1, t2);
        }
    }

    #[test]
    fn holdout_split_filters_both_seats() {
        let dir = tempfile::tempdir().unwrap();
        let index = small_dataset(dir.path());
        let (train, holdout) = holdout_split(&index, &[2]).unwrap();
        assert!(train
            .trajectories
            .iter()
            .all(|t| !t.policy_ids.contains(&2)));
        assert!(holdout.trajectories.iter().all(|t| t.policy_ids.contains(&2)));
        assert_eq!(
            train.trajectories.len() + holdout.trajectories.len(),
            index.trajectories.len()
        );

        // Zero holdout: everything trains.
        let (train, holdout) = holdout_split(&index, &[]).unwrap();
        assert_eq!(train.trajectories.len(), index.trajectories.len());
        assert!(holdout.trajectories.is_empty());

        // Holding out everyone leaves nothing to train on.
        assert!(holdout_split(&index, &[0, 1, 2]).is_err());
        // Unknown ids are rejected.
        assert!(holdout_split(&index, &[99]).is_err());
    }

    #[test]
    fn macro_coverage_across_population() {
        // Across a modest population's rollouts every macro label shows up.
        let dir = tempfile::tempdir().unwrap();
        let pop = make_population(8, 9).unwrap();
        let cfg = CollectConfig {
            layouts: vec!["open".into()],
            episodes_per_pair: 1,
            episode_ticks: Some(400),
            competence_levels: vec![0.0, 0.1],
            seed: 7,
        };
        let index = collect_rollouts(&pop, &cfg, dir.path()).unwrap();
        let mut seen = [false; crate::env::MACRO_COUNT];
        for meta in &index.trajectories {
            let traj = index.load_trajectory(meta).unwrap();
            for seat in 0..2 {
                for (_, m) in &traj.macros[seat] {
                    seen[m.index()] = true;
                }
            }
        }
        let missing: Vec<MacroAction> = MacroAction::ALL
            .iter()
            .copied()
            .filter(|m| !seen[m.index()])
            .collect();
        assert!(missing.is_empty(), "labels never observed: {missing:?}");
    }
}
