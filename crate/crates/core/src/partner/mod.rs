//! Behavior-preference (BP) partner population: scripted planners whose
//! target priorities come from per-policy shaping weights, giving a diverse
//! spread of kitchen strategies, plus rollout collection into trajectory
//! datasets.

pub mod planner;
pub mod rollouts;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{
    GameState, IngredientKind, Item, PlateContents, PrimitiveAction, Recipe, StationKind,
    StationPhase, Tile, BURN_WINDOW_TICKS,
};
use crate::error::{Error, Result};
use crate::rng;
use planner::{
    ingredient_station, plate_accepts, station_accepting, step_toward, Task, WorldView,
};

pub use rollouts::{collect_rollouts, holdout_split, CollectConfig, DatasetIndex, TrajectoryMeta};

/// Shaping terms a BP partner's objective weighs. Negative weights actively
/// avoid the behavior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct ShapingWeights {
    pub onion_pickup: f64,
    pub rice_boiling: f64,
    pub grilling: f64,
    pub dishwashing: f64,
    pub plating: f64,
    pub delivery: f64,
    pub idle_penalty: f64,
    pub bonus_seeking: f64,
}

impl ShapingWeights {
    pub fn station(&self, kind: StationKind) -> f64 {
        match kind {
            StationKind::Pot => self.onion_pickup,
            StationKind::RiceCooker => self.rice_boiling,
            StationKind::Grill => self.grilling,
        }
    }

    pub fn as_vec(&self) -> [f64; 8] {
        [
            self.onion_pickup,
            self.rice_boiling,
            self.grilling,
            self.dishwashing,
            self.plating,
            self.delivery,
            self.idle_penalty,
            self.bonus_seeking,
        ]
    }

    pub fn is_valid(&self) -> bool {
        let v = self.as_vec();
        v.iter().all(|x| x.is_finite()) && v.iter().any(|x| *x != 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    /// Takes the top-utility task regardless of the partner.
    Greedy,
    /// Plates early to dodge burns and yields contested targets.
    Cautious,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BehaviorPreference {
    pub weights: ShapingWeights,
    pub style: Style,
    pub seed: u64,
}

/// A scripted partner: greedy shaping-weighted target selection, A* pathing,
/// re-planned every tick. Deterministic given (state, seed).
#[derive(Debug, Clone)]
pub struct ScriptedPolicy {
    pub id: u32,
    pub pref: BehaviorPreference,
    /// Path-noise probability; the stand-in for training-checkpoint
    /// competence levels.
    pub eps: f64,
    rng: ChaCha8Rng,
    last_task: Option<Task>,
    /// Own recent positions, for A-B-A-B oscillation detection.
    recent: Vec<(i32, i32)>,
    last_partner_pos: Option<(i32, i32)>,
}

/// Competence levels emulating early/mid/final training checkpoints.
pub const COMPETENCE_LEVELS: [f64; 3] = [0.0, 0.1, 0.3];

impl ScriptedPolicy {
    pub fn new(id: u32, pref: BehaviorPreference) -> ScriptedPolicy {
        ScriptedPolicy {
            id,
            pref,
            eps: 0.0,
            rng: rng::rng(pref.seed, 0),
            last_task: None,
            recent: Vec::new(),
            last_partner_pos: None,
        }
    }

    pub fn with_competence(mut self, eps: f64) -> ScriptedPolicy {
        self.eps = eps;
        self
    }

    /// Reseed for an episode; call once per episode per seat.
    pub fn reset(&mut self, episode_seed: u64) {
        self.rng = rng::rng(self.pref.seed ^ episode_seed, 0x5ea7);
        self.last_task = None;
        self.recent.clear();
        self.last_partner_pos = None;
    }

    /// Pick this tick's primitive action.
    pub fn act(&mut self, state: &GameState, seat: usize) -> PrimitiveAction {
        let me = state.players[seat].pos;
        let partner = state.players[1 - seat].pos;

        // Right of way: seat 0 plans through the partner, seat 1 detours.
        // Either seat detours around a partner that has stopped moving.
        let parked = self.last_partner_pos == Some(partner);
        self.last_partner_pos = Some(partner);
        let avoid_partner = seat == 1 || parked;

        self.recent.push(me);
        if self.recent.len() > 4 {
            self.recent.remove(0);
        }
        let oscillating = self.recent.len() == 4
            && self.recent[0] == self.recent[2]
            && self.recent[1] == self.recent[3]
            && self.recent[0] != self.recent[1];

        let task = self.choose_task(state, seat);
        self.last_task = Some(task);
        let mut action = if oscillating && seat == 1 {
            // Break symmetric dances: the lower seat keeps its path, this
            // one yields a tick.
            self.recent.clear();
            PrimitiveAction::Stay
        } else {
            step_toward(state, seat, task, avoid_partner).unwrap_or(PrimitiveAction::Stay)
        };
        if self.eps > 0.0 && self.rng.gen::<f64>() < self.eps {
            // Competence noise wobbles movement, never interacts.
            const MOVES: [PrimitiveAction; 5] = [
                PrimitiveAction::Up,
                PrimitiveAction::Down,
                PrimitiveAction::Left,
                PrimitiveAction::Right,
                PrimitiveAction::Stay,
            ];
            action = MOVES[self.rng.gen_range(0..MOVES.len())];
        }
        action
    }

    fn choose_task(&self, state: &GameState, seat: usize) -> Task {
        let view = WorldView::new(state, seat);
        let mut candidates = candidate_tasks(&view, &self.pref);
        // Idle is always available; its utility sinks with idle_penalty.
        candidates.push((Task::Idle, 0.05 - 0.5 * self.pref.weights.idle_penalty));

        // Commitment bonus against target thrash.
        if let Some(prev) = self.last_task {
            for (task, u) in candidates.iter_mut() {
                if *task == prev {
                    *u += 0.15;
                }
            }
        }

        // Highest utility wins; ties break toward the lowest target
        // coordinate, then the task listing order.
        let mut best = (Task::Idle, f64::NEG_INFINITY, (i32::MAX, i32::MAX));
        for (task, u) in candidates {
            let coord = task
                .target(state)
                .map(|(x, y)| (y, x))
                .unwrap_or((i32::MAX, i32::MAX));
            if u > best.1 || (u == best.1 && coord < best.2) {
                best = (task, u, coord);
            }
        }
        best.0
    }
}

/// Generate scored candidate tasks for a seat under a preference.
fn candidate_tasks(view: &WorldView, pref: &BehaviorPreference) -> Vec<(Task, f64)> {
    let w = &pref.weights;
    let cautious = pref.style == Style::Cautious;
    let state = view.state;
    let seat = view.seat;
    let mut out: Vec<(Task, f64)> = Vec::new();

    // Path-length discount keeps plans efficient and stable.
    let dist_cost = |d: u32| 0.02 * d as f64;
    // The partner being strictly closer makes a cautious agent yield.
    let contested = |pos: (i32, i32)| {
        let me = state.players[seat].pos;
        let other = state.players[1 - seat].pos;
        (other.0 - pos.0).abs() + (other.1 - pos.1).abs()
            < (me.0 - pos.0).abs() + (me.1 - pos.1).abs()
    };
    let mut push = |task: Task, base: f64, pos: Option<(i32, i32)>, dist: u32| {
        let mut u = base - dist_cost(dist);
        if cautious {
            if let Some(p) = pos {
                if contested(p) {
                    u -= 0.5;
                }
            }
        }
        out.push((task, u));
    };

    // Urgency of plating a ready station grows toward the burn deadline.
    let burn_urgency = |phase: StationPhase| match phase {
        StationPhase::Ready { ticks_since } => ticks_since as f64 / BURN_WINDOW_TICKS as f64,
        _ => 0.0,
    };

    let station_reachable = |kind: StationKind| {
        view.reach(state.stations[view.station(kind)].pos).is_some()
    };

    match view.held() {
        None => {
            // Clearing burnt stations.
            for (i, s) in state.stations.iter().enumerate() {
                if s.phase == StationPhase::Burnt {
                    if let Some(d) = view.reach(s.pos) {
                        push(
                            Task::CollectBurnt { station: i },
                            1.0 + 2.0 * w.dishwashing,
                            Some(s.pos),
                            d,
                        );
                    }
                }
            }
            // A plate is useful whenever something cooks or sits ready.
            // Counters only count as plate sources when this seat can reach
            // a station; otherwise this seat's job is feeding the hand-off
            // pipeline from the stack (bounded, or the counters silt up).
            let plate_demand = state.stations.iter().any(|s| {
                matches!(
                    s.phase,
                    StationPhase::Cooking { .. } | StationPhase::Ready { .. }
                )
            });
            let any_station_reachable = StationKind::ALL.iter().any(|&k| station_reachable(k));
            if plate_demand {
                let mut sources = Vec::new();
                if any_station_reachable {
                    sources = view.tiles_where(|t| t == Tile::PlateStack);
                    sources
                        .extend(view.counters_with(|it| it == Item::Plate(PlateContents::Empty)));
                } else {
                    let parked = view
                        .counters_with(|it| it == Item::Plate(PlateContents::Empty))
                        .len();
                    if parked < 2 {
                        sources = view.tiles_where(|t| t == Tile::PlateStack);
                    }
                }
                if let Some((pos, d)) = view.nearest_reachable(&sources) {
                    let urgency: f64 = state
                        .stations
                        .iter()
                        .map(|s| burn_urgency(s.phase))
                        .fold(0.0, f64::max);
                    let bump = if cautious { 0.8 * urgency } else { 0.3 * urgency };
                    push(Task::Fetch { pos }, 1.0 + 1.2 * w.plating + bump, Some(pos), d);
                }
            }
            // Partially plated dishes parked on counters, but only when the
            // missing half is actually underway (otherwise picking them up
            // just re-creates the hands-full deadlock).
            let in_progress = |kind: StationKind| {
                let s = &state.stations[view.station(kind)];
                !matches!(s.phase, StationPhase::Idle | StationPhase::Burnt)
            };
            if any_station_reachable {
                let partials = view.counters_with(|it| match it {
                    Item::Plate(PlateContents::Rice) => in_progress(StationKind::Grill),
                    Item::Plate(PlateContents::Protein) => in_progress(StationKind::RiceCooker),
                    _ => false,
                });
                if let Some((pos, d)) = view.nearest_reachable(&partials) {
                    push(Task::Fetch { pos }, 0.9 + 1.0 * w.plating, Some(pos), d);
                }
            }
            // Ingredients demanded by open orders.
            for recipe in Recipe::ALL {
                if view.orders_for(recipe) == 0 {
                    continue;
                }
                let kinds: &[IngredientKind] = match recipe {
                    Recipe::Soup => &[IngredientKind::Onion],
                    Recipe::RiceDish => &[IngredientKind::Rice, IngredientKind::Protein],
                };
                for &kind in kinds {
                    let skind = ingredient_station(kind);
                    if !station_accepting(state, skind) {
                        continue;
                    }
                    let mut sources = view.tiles_where(|t| t == Tile::IngredientSource(kind));
                    if station_reachable(skind) {
                        sources.extend(view.counters_with(|it| it == Item::Ingredient(kind)));
                    } else {
                        // Feed the pipeline only up to what the station needs.
                        let parked = view.counters_with(|it| it == Item::Ingredient(kind)).len();
                        if parked >= skind.capacity() {
                            continue;
                        }
                    }
                    if let Some((pos, d)) = view.nearest_reachable(&sources) {
                        push(Task::Fetch { pos }, 0.8 + w.station(skind), Some(pos), d);
                    }
                }
            }
            // Completed dishes parked on counters that match an open order;
            // only worth grabbing if this seat can deliver.
            let delivery_reachable = view
                .tiles_where(|t| t == Tile::DeliveryWindow)
                .iter()
                .any(|&p| view.reach(p).is_some());
            if delivery_reachable {
                let dishes = view.counters_with(|it| match it {
                    Item::Plate(c) => c.completed_recipe().is_some_and(|r| view.orders_for(r) > 0),
                    _ => false,
                });
                if let Some((pos, d)) = view.nearest_reachable(&dishes) {
                    push(Task::Fetch { pos }, 2.0 + 1.5 * w.delivery, Some(pos), d);
                }
            }
            // Burnt leftovers parked on counters beg for the trash.
            let trash_reachable = view
                .tiles_where(|t| t == Tile::Trash)
                .iter()
                .any(|&p| view.reach(p).is_some());
            if trash_reachable {
                let burnt = view.counters_with(|it| it == Item::Burnt);
                if let Some((pos, d)) = view.nearest_reachable(&burnt) {
                    push(Task::Fetch { pos }, 0.5 + 1.2 * w.dishwashing, Some(pos), d);
                }
            }
        }
        Some(Item::Ingredient(kind)) => {
            let station_kind = ingredient_station(kind);
            let si = view.station(station_kind);
            let pos = state.stations[si].pos;
            match view.reach(pos) {
                Some(d) if station_accepting(state, station_kind) => {
                    push(Task::Load { station: si }, 1.5 + w.station(station_kind), Some(pos), d);
                }
                Some(_) => {
                    // Station busy: park the ingredient nearby rather than pace.
                    if let Some(drop) = view.handoff_counter_toward(pos) {
                        let d = view.reach(drop).unwrap_or(0);
                        let base = if cautious { 0.5 } else { 0.25 };
                        push(Task::Place { pos: drop }, base, Some(drop), d);
                    }
                }
                None => {
                    // Station on the other side: hand off over a counter.
                    if let Some(drop) = view.handoff_counter_toward(pos) {
                        let d = view.reach(drop).unwrap_or(0);
                        push(
                            Task::Place { pos: drop },
                            1.0 + 0.5 * w.station(station_kind),
                            Some(drop),
                            d,
                        );
                    }
                }
            }
        }
        Some(Item::Plate(contents)) => match contents.completed_recipe() {
            Some(recipe) => {
                let deliveries = view.tiles_where(|t| t == Tile::DeliveryWindow);
                if view.orders_for(recipe) > 0 {
                    if let Some((pos, d)) = view.nearest_reachable(&deliveries) {
                        let bonus = state
                            .orders
                            .iter()
                            .filter(|o| o.recipe == recipe)
                            .map(|o| if o.bonus_active() { 1.0 } else { 0.0 })
                            .fold(0.0, f64::max);
                        push(
                            Task::Deliver { pos },
                            2.5 + 2.0 * w.delivery + 0.8 * w.bonus_seeking * bonus,
                            Some(pos),
                            d,
                        );
                    } else if let Some(dst) = deliveries.first() {
                        if let Some(drop) = view.handoff_counter_toward(*dst) {
                            let d = view.reach(drop).unwrap_or(0);
                            push(Task::Place { pos: drop }, 1.5 + 0.5 * w.delivery, Some(drop), d);
                        }
                    }
                } else {
                    // No matching order: park the dish for later.
                    if let Some(dst) = deliveries.first() {
                        if let Some(drop) = view.handoff_counter_toward(*dst) {
                            let d = view.reach(drop).unwrap_or(0);
                            push(Task::Place { pos: drop }, 0.3, Some(drop), d);
                        }
                    }
                }
            }
            None => {
                // Plate (empty or partial): take from a compatible ready
                // station, or wait next to the soonest compatible cooker.
                let mut any_reachable = false;
                let mut any_in_progress = false;
                for (i, s) in state.stations.iter().enumerate() {
                    if !plate_accepts(contents, s.kind) {
                        continue;
                    }
                    let reach = view.reach(s.pos);
                    any_reachable |= reach.is_some();
                    match (s.phase, reach) {
                        (StationPhase::Ready { .. }, Some(d)) => {
                            any_in_progress = true;
                            let urgency = burn_urgency(s.phase);
                            let bump = if cautious { 1.0 * urgency } else { 0.4 * urgency };
                            push(
                                Task::Plate { station: i },
                                2.0 + 1.5 * w.plating + bump,
                                Some(s.pos),
                                d,
                            );
                        }
                        (StationPhase::Cooking { .. }, Some(d)) => {
                            any_in_progress = true;
                            push(
                                Task::StandBy { station: i },
                                0.6 + 0.5 * w.plating,
                                Some(s.pos),
                                d,
                            );
                        }
                        _ => {}
                    }
                }
                if !any_reachable {
                    // Hand the plate across to the cooking side.
                    let dst = state.stations[0].pos;
                    if let Some(drop) = view.handoff_counter_toward(dst) {
                        let d = view.reach(drop).unwrap_or(0);
                        push(Task::Place { pos: drop }, 1.0 + 0.4 * w.plating, Some(drop), d);
                    }
                } else if !any_in_progress && contents != PlateContents::Empty {
                    // Holding half a rice dish while nothing cooks its other
                    // half: park the plate and free the hands, or the kitchen
                    // deadlocks with everyone clutching partial plates.
                    let dst = state.stations[view.station(StationKind::RiceCooker)].pos;
                    if let Some(drop) = view.handoff_counter_toward(dst) {
                        let d = view.reach(drop).unwrap_or(0);
                        push(Task::Place { pos: drop }, 0.9 + 0.3 * w.plating, Some(drop), d);
                    }
                }
            }
        },
        Some(Item::Burnt) => {
            let trashes = view.tiles_where(|t| t == Tile::Trash);
            if let Some((pos, d)) = view.nearest_reachable(&trashes) {
                push(Task::Trash { pos }, 1.2 + 1.5 * w.dishwashing, Some(pos), d);
            } else if let Some(dst) = trashes.first() {
                if let Some(drop) = view.handoff_counter_toward(*dst) {
                    let d = view.reach(drop).unwrap_or(0);
                    push(Task::Place { pos: drop }, 0.5 + 0.5 * w.dishwashing, Some(drop), d);
                }
            }
        }
    }

    out
}

/// Build `n` BP policies on a stratified grid: cycling pot-, cooker-,
/// grill-, and support-emphasized archetypes with seeded jitter, alternating
/// styles. Deterministic from `seed`.
pub fn make_population(n: usize, seed: u64) -> Result<Vec<ScriptedPolicy>> {
    const GRID_CAPACITY: usize = 48;
    if n < 2 {
        return Err(Error::Config(format!("population size {n} < 2")));
    }
    if n > GRID_CAPACITY {
        return Err(Error::Config(format!(
            "population size {n} exceeds the stratification grid ({GRID_CAPACITY})"
        )));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = rng::rng(seed, 0xb0 + i as u64);
        let mut jit = |base: f64| base + r.gen_range(-0.15..0.15);
        let weights = match i % 4 {
            0 => ShapingWeights {
                onion_pickup: jit(1.2),
                rice_boiling: jit(0.1),
                grilling: jit(0.1),
                dishwashing: jit(0.2),
                plating: jit(0.5),
                delivery: jit(0.5),
                idle_penalty: jit(0.4),
                bonus_seeking: jit(0.3),
            },
            1 => ShapingWeights {
                onion_pickup: jit(0.1),
                rice_boiling: jit(1.2),
                grilling: jit(0.7),
                dishwashing: jit(0.2),
                plating: jit(0.5),
                delivery: jit(0.4),
                idle_penalty: jit(0.4),
                bonus_seeking: jit(0.3),
            },
            2 => ShapingWeights {
                onion_pickup: jit(0.1),
                rice_boiling: jit(0.7),
                grilling: jit(1.2),
                dishwashing: jit(0.2),
                plating: jit(0.5),
                delivery: jit(0.4),
                idle_penalty: jit(0.4),
                bonus_seeking: jit(0.3),
            },
            _ => ShapingWeights {
                onion_pickup: jit(0.2),
                rice_boiling: jit(0.2),
                grilling: jit(0.2),
                dishwashing: jit(1.0),
                plating: jit(1.2),
                delivery: jit(1.2),
                idle_penalty: jit(0.5),
                bonus_seeking: jit(0.6),
            },
        };
        debug_assert!(weights.is_valid());
        let style = if (i / 4) % 2 == 0 { Style::Greedy } else { Style::Cautious };
        let pref = BehaviorPreference {
            weights,
            style,
            seed: rng::mix(seed, 0x9010 + i as u64),
        };
        out.push(ScriptedPolicy::new(i as u32, pref));
    }
    for a in 0..out.len() {
        for b in a + 1..out.len() {
            if out[a].pref.weights == out[b].pref.weights {
                return Err(Error::Config(format!(
                    "stratification produced duplicate weights for policies {a} and {b}"
                )));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::load_layout;

    #[test]
    fn population_is_deterministic_and_distinct() {
        let a = make_population(12, 7).unwrap();
        let b = make_population(12, 7).unwrap();
        assert_eq!(a.len(), 12);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.pref, y.pref);
        }
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                assert_ne!(a[i].pref.weights, a[j].pref.weights);
            }
        }
    }

    #[test]
    fn population_strata_cover_station_kinds() {
        // With n = 12, each station kind gets ceil(n/4) = 3 emphasizers.
        let pop = make_population(12, 3).unwrap();
        let dominant = |w: &ShapingWeights| {
            let v = [w.onion_pickup, w.rice_boiling, w.grilling];
            (0..3).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap()
        };
        let mut counts = [0usize; 3];
        for p in &pop {
            let w = &p.pref.weights;
            if w.onion_pickup.max(w.rice_boiling).max(w.grilling) > w.plating {
                counts[dominant(w)] += 1;
            }
        }
        for c in counts {
            assert!(c >= 3, "station-kind coverage too thin: {counts:?}");
        }
    }

    #[test]
    fn out_of_range_population_sizes_error() {
        assert!(matches!(make_population(1, 0), Err(Error::Config(_))));
        assert!(matches!(make_population(49, 0), Err(Error::Config(_))));
    }

    #[test]
    fn scripted_pair_scores_on_every_connected_layout() {
        for name in ["open", "hallway", "ring"] {
            let mut s = load_layout(name, 5).unwrap();
            let pop = make_population(4, 11).unwrap();
            let mut p0 = pop[0].clone();
            let mut p1 = pop[3].clone();
            p0.reset(100);
            p1.reset(101);
            while !s.is_terminal() {
                let a0 = p0.act(&s, 0);
                let a1 = p1.act(&s, 1);
                s.step([a0, a1]);
            }
            assert!(s.score > 0, "scripted pair scored 0 on {name}");
        }
    }

    #[test]
    fn scripted_pair_is_deterministic() {
        let run = || {
            let mut s = load_layout("open", 9).unwrap();
            let pop = make_population(4, 2).unwrap();
            let mut p0 = pop[1].clone();
            let mut p1 = pop[2].clone();
            p0.reset(55);
            p1.reset(56);
            let mut actions = Vec::new();
            while !s.is_terminal() {
                let a0 = p0.act(&s, 0);
                let a1 = p1.act(&s, 1);
                actions.push((a0, a1));
                s.step([a0, a1]);
            }
            (actions, s.score)
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn forced_coord_pair_hands_off_items() {
        let mut s = load_layout("forced_coord", 5).unwrap();
        let pop = make_population(4, 11).unwrap();
        let mut p0 = pop[0].clone();
        let mut p1 = pop[3].clone();
        p0.reset(1);
        p1.reset(2);
        let mut placed = 0;
        let mut picked = 0;
        while !s.is_terminal() {
            let a0 = p0.act(&s, 0);
            let a1 = p1.act(&s, 1);
            let (_, ev) = s.step([a0, a1]);
            for e in &ev {
                match e {
                    crate::env::Event::PlacedOnCounter { .. } => placed += 1,
                    crate::env::Event::PickedFromCounter { .. } => picked += 1,
                    _ => {}
                }
            }
        }
        assert!(placed > 0, "no hand-off placements on forced_coord");
        assert!(picked > 0, "no hand-off pickups on forced_coord");
    }
}
