//! Ego-centric observation featurization.
//!
//! A pure function of (state, player index) producing a fixed-length vector
//! with every feature in [-1, 1]. The length is the same for every layout
//! (all layouts carry three stations and up to four concurrent orders), so
//! one network services all kitchens.

use super::state::{GameState, StationPhase};
use super::tile::{IngredientKind, Item, PlateContents, Recipe, Tile, BURN_WINDOW_TICKS};

/// Distinguishable held-item classes.
const HELD_CLASSES: usize = 10;
const ORDER_SLOTS: usize = 4;
const STATIONS: usize = 3;

/// Pose block: x, y, orientation one-hot.
const POSE: usize = 2 + 4;
/// Per-station block: phase one-hot, cook progress, ready age, fill, delta.
const STATION_FEATS: usize = 4 + 1 + 1 + 1 + 2;
/// Per-order block: present, recipe one-hot, urgency, bonus flag.
const ORDER_FEATS: usize = 1 + 2 + 1 + 1;
/// Nearest-object deltas: onion/rice/protein source, plates, delivery, trash.
const NEAREST_OBJECTS: usize = 6;

/// Total observation length.
pub const OBS_LEN: usize = (POSE + HELD_CLASSES) * 2   // ego + partner
    + 2                                                // partner delta
    + STATIONS * STATION_FEATS
    + ORDER_SLOTS * ORDER_FEATS
    + NEAREST_OBJECTS * 2
    + 1;                                               // time remaining

fn held_class(item: Option<Item>) -> usize {
    match item {
        None => 0,
        Some(Item::Ingredient(IngredientKind::Onion)) => 1,
        Some(Item::Ingredient(IngredientKind::Rice)) => 2,
        Some(Item::Ingredient(IngredientKind::Protein)) => 3,
        Some(Item::Plate(PlateContents::Empty)) => 4,
        Some(Item::Plate(PlateContents::Rice)) => 5,
        Some(Item::Plate(PlateContents::Protein)) => 6,
        Some(Item::Plate(PlateContents::Soup)) => 7,
        Some(Item::Plate(PlateContents::RiceDish)) => 8,
        Some(Item::Burnt) => 9,
    }
}

/// Featurize the state from `player`'s perspective.
///
/// Panics if `player` is not 0 or 1.
pub fn observe(state: &GameState, player: usize) -> Vec<f64> {
    assert!(player < 2, "player index must be 0 or 1");
    let partner = 1 - player;
    let w = (state.width - 1).max(1) as f64;
    let h = (state.height - 1).max(1) as f64;
    let norm_x = |x: i32| (x as f64 / w) * 2.0 - 1.0;
    let norm_y = |y: i32| (y as f64 / h) * 2.0 - 1.0;
    let ego = &state.players[player];
    let oth = &state.players[partner];

    let mut v = Vec::with_capacity(OBS_LEN);

    for p in [ego, oth] {
        v.push(norm_x(p.pos.0));
        v.push(norm_y(p.pos.1));
        let mut orient = [0.0; 4];
        orient[p.orientation.index()] = 1.0;
        v.extend_from_slice(&orient);
        let mut held = [0.0; HELD_CLASSES];
        held[held_class(p.held)] = 1.0;
        v.extend_from_slice(&held);
    }

    v.push((oth.pos.0 - ego.pos.0) as f64 / w);
    v.push((oth.pos.1 - ego.pos.1) as f64 / h);

    for s in &state.stations {
        let mut phase = [0.0; 4];
        let (pi, cook, age) = match s.phase {
            StationPhase::Idle => (0, 0.0, 0.0),
            StationPhase::Cooking { ticks_left } => {
                (1, ticks_left as f64 / s.kind.cook_ticks() as f64, 0.0)
            }
            StationPhase::Ready { ticks_since } => {
                (2, 0.0, ticks_since as f64 / BURN_WINDOW_TICKS as f64)
            }
            StationPhase::Burnt => (3, 0.0, 1.0),
        };
        phase[pi] = 1.0;
        v.extend_from_slice(&phase);
        v.push(cook);
        v.push(age);
        v.push(s.contents.len() as f64 / s.kind.capacity() as f64);
        v.push((s.pos.0 - ego.pos.0) as f64 / w);
        v.push((s.pos.1 - ego.pos.1) as f64 / h);
    }

    for i in 0..ORDER_SLOTS {
        match state.orders.get(i) {
            Some(o) => {
                v.push(1.0);
                v.push(if o.recipe == Recipe::Soup { 1.0 } else { 0.0 });
                v.push(if o.recipe == Recipe::RiceDish { 1.0 } else { 0.0 });
                v.push(o.time_remaining as f64 / o.time_limit as f64);
                v.push(if o.bonus_active() { 1.0 } else { 0.0 });
            }
            None => v.extend_from_slice(&[0.0; ORDER_FEATS]),
        }
    }

    let targets: [&dyn Fn(Tile) -> bool; NEAREST_OBJECTS] = [
        &|t| t == Tile::IngredientSource(IngredientKind::Onion),
        &|t| t == Tile::IngredientSource(IngredientKind::Rice),
        &|t| t == Tile::IngredientSource(IngredientKind::Protein),
        &|t| t == Tile::PlateStack,
        &|t| t == Tile::DeliveryWindow,
        &|t| t == Tile::Trash,
    ];
    for pred in targets {
        let (dx, dy) = nearest_delta(state, ego.pos, pred);
        v.push(dx / w);
        v.push(dy / h);
    }

    v.push(state.ticks_remaining() as f64 / state.episode_ticks.max(1) as f64);

    debug_assert_eq!(v.len(), OBS_LEN);
    debug_assert!(v.iter().all(|x| (-1.0..=1.0).contains(x)));
    v
}

/// Delta to the nearest tile satisfying `pred` (Manhattan metric, ties by
/// scan order). Zero if no such tile exists.
fn nearest_delta(state: &GameState, from: (i32, i32), pred: &dyn Fn(Tile) -> bool) -> (f64, f64) {
    let mut best: Option<((i32, i32), i32)> = None;
    for y in 0..state.height as i32 {
        for x in 0..state.width as i32 {
            if pred(state.tile(x, y)) {
                let d = (x - from.0).abs() + (y - from.1).abs();
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some(((x, y), d));
                }
            }
        }
    }
    match best {
        Some(((x, y), _)) => ((x - from.0) as f64, (y - from.1) as f64),
        None => (0.0, 0.0),
    }
}
