//! Target-directed planning shared by scripted partners and the macro
//! executor: A* routing on the grid plus the task/utility machinery.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::env::{
    GameState, IngredientKind, Item, Orientation, PlateContents, PrimitiveAction, Recipe,
    StationKind, StationPhase, Tile,
};

/// A concrete short-horizon objective with a grid target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    /// Pick up from a source, plate stack, or counter.
    Fetch { pos: (i32, i32) },
    /// Load the held ingredient into a station.
    Load { station: usize },
    /// Transfer a ready station's contents onto the held plate.
    Plate { station: usize },
    /// Deliver the held dish.
    Deliver { pos: (i32, i32) },
    /// Put the held item down on a counter.
    Place { pos: (i32, i32) },
    /// Collect a burnt station's contents (empty-handed).
    CollectBurnt { station: usize },
    /// Dispose of the held item.
    Trash { pos: (i32, i32) },
    /// Loiter next to a station that will need attention.
    StandBy { station: usize },
    Idle,
}

impl Task {
    pub fn target(&self, state: &GameState) -> Option<(i32, i32)> {
        match *self {
            Task::Fetch { pos } | Task::Deliver { pos } | Task::Place { pos } | Task::Trash { pos } => {
                Some(pos)
            }
            Task::Load { station }
            | Task::Plate { station }
            | Task::CollectBurnt { station }
            | Task::StandBy { station } => Some(state.stations[station].pos),
            Task::Idle => None,
        }
    }

    /// Whether reaching the target should end in an interact.
    fn interacts(&self) -> bool {
        !matches!(self, Task::StandBy { .. } | Task::Idle)
    }
}

/// Shortest-path step toward a cell adjacent to `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Route {
    /// First move along the path; `None` when already adjacent.
    pub first: Option<PrimitiveAction>,
    /// Remaining moves to stand adjacent to the target.
    pub dist: u32,
}

fn manhattan(a: (i32, i32), b: (i32, i32)) -> i32 {
    (a.0 - b.0).abs() + (a.1 - b.1).abs()
}

const DIRS: [(Orientation, PrimitiveAction); 4] = [
    (Orientation::North, PrimitiveAction::Up),
    (Orientation::South, PrimitiveAction::Down),
    (Orientation::West, PrimitiveAction::Left),
    (Orientation::East, PrimitiveAction::Right),
];

/// A* from the seat's position to any walkable tile adjacent to `target`.
/// `avoid` is treated as an extra obstacle (the partner, usually).
/// Deterministic: ties resolve by (f, h, y, x) and fixed neighbor order.
pub fn route_adjacent(
    state: &GameState,
    from: (i32, i32),
    target: (i32, i32),
    avoid: Option<(i32, i32)>,
) -> Option<Route> {
    if manhattan(from, target) == 1 {
        return Some(Route { first: None, dist: 0 });
    }
    let goal = |p: (i32, i32)| manhattan(p, target) == 1 && state.tile(p.0, p.1).walkable();
    let blocked = |p: (i32, i32)| !state.tile(p.0, p.1).walkable() || avoid == Some(p);

    let w = state.width as i32;
    let idx = |p: (i32, i32)| (p.1 * w + p.0) as usize;
    let mut dist = vec![u32::MAX; state.width * state.height];
    let mut first_step: Vec<Option<PrimitiveAction>> = vec![None; state.width * state.height];
    // (f, h, y, x) min-heap.
    let mut heap: BinaryHeap<Reverse<(u32, u32, i32, i32)>> = BinaryHeap::new();
    dist[idx(from)] = 0;
    let h0 = (manhattan(from, target) as u32).saturating_sub(1);
    heap.push(Reverse((h0, h0, from.1, from.0)));

    while let Some(Reverse((f, h, y, x))) = heap.pop() {
        let p = (x, y);
        let d = dist[idx(p)];
        if f - h > d {
            continue; // stale heap entry
        }
        if goal(p) {
            return Some(Route {
                first: first_step[idx(p)],
                dist: d,
            });
        }
        for (_, action) in DIRS {
            let (dx, dy) = action.movement().unwrap().delta();
            let n = (x + dx, y + dy);
            if !state.in_bounds(n.0, n.1) || blocked(n) {
                continue;
            }
            let nd = d + 1;
            if nd < dist[idx(n)] {
                dist[idx(n)] = nd;
                first_step[idx(n)] = first_step[idx(p)].or(Some(action));
                let h = manhattan(n, target).saturating_sub(1) as u32;
                heap.push(Reverse((nd + h, h, n.1, n.0)));
            }
        }
    }
    None
}

/// Reachability that tries with the partner as an obstacle first, then
/// without (the partner will usually move).
pub fn route_for_seat(state: &GameState, seat: usize, target: (i32, i32)) -> Option<Route> {
    let from = state.players[seat].pos;
    let partner = state.players[1 - seat].pos;
    route_adjacent(state, from, target, Some(partner))
        .or_else(|| route_adjacent(state, from, target, None))
}

/// Translate a task into this tick's primitive action. Returns `None` when
/// the task has become impossible (no route).
///
/// `avoid_partner` selects the routing stance: detour around the partner, or
/// plan straight through them and rely on collision rules plus a sidestep.
/// Giving the seats different stances kills the synchronized corridor dance
/// two one-tick replanners otherwise fall into.
pub fn step_toward(
    state: &GameState,
    seat: usize,
    task: Task,
    avoid_partner: bool,
) -> Option<PrimitiveAction> {
    let target = match task.target(state) {
        Some(t) => t,
        None => return Some(PrimitiveAction::Stay),
    };
    let me = &state.players[seat];
    if manhattan(me.pos, target) == 1 {
        if !task.interacts() {
            return Some(PrimitiveAction::Stay);
        }
        // Face the target, then interact.
        let facing = DIRS
            .iter()
            .find(|(o, _)| {
                let (dx, dy) = o.delta();
                (me.pos.0 + dx, me.pos.1 + dy) == target
            })
            .map(|&(o, a)| (o, a))
            .expect("adjacent target must be in a cardinal direction");
        if me.orientation == facing.0 {
            return Some(PrimitiveAction::Interact);
        }
        return Some(facing.1);
    }
    let partner = state.players[1 - seat].pos;
    let route = if avoid_partner {
        route_for_seat(state, seat, target)?
    } else {
        route_adjacent(state, me.pos, target, None)?
    };
    match route.first {
        Some(step) => {
            // If the chosen step lands on the partner, sidestep
            // deterministically or wait.
            let (dx, dy) = step.movement().unwrap().delta();
            let next = (me.pos.0 + dx, me.pos.1 + dy);
            if next == partner {
                for (_, alt) in DIRS {
                    if alt == step {
                        continue;
                    }
                    let (ax, ay) = alt.movement().unwrap().delta();
                    let alt_next = (me.pos.0 + ax, me.pos.1 + ay);
                    if state.tile(alt_next.0, alt_next.1).walkable() && alt_next != partner {
                        return Some(alt);
                    }
                }
                return Some(PrimitiveAction::Stay);
            }
            Some(step)
        }
        None => Some(PrimitiveAction::Stay),
    }
}

/// World queries used when generating candidate tasks.
pub struct WorldView<'a> {
    pub state: &'a GameState,
    pub seat: usize,
}

impl<'a> WorldView<'a> {
    pub fn new(state: &'a GameState, seat: usize) -> Self {
        WorldView { state, seat }
    }

    pub fn reach(&self, target: (i32, i32)) -> Option<u32> {
        route_for_seat(self.state, self.seat, target).map(|r| r.dist)
    }

    pub fn held(&self) -> Option<Item> {
        self.state.players[self.seat].held
    }

    /// Open orders of a recipe.
    pub fn orders_for(&self, recipe: Recipe) -> usize {
        self.state.orders.iter().filter(|o| o.recipe == recipe).count()
    }

    /// Station index for a kind (exactly one per layout).
    pub fn station(&self, kind: StationKind) -> usize {
        self.state
            .stations
            .iter()
            .position(|s| s.kind == kind)
            .expect("layouts carry one station per kind")
    }

    /// Positions of tiles satisfying a predicate.
    pub fn tiles_where(&self, pred: impl Fn(Tile) -> bool) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        for y in 0..self.state.height as i32 {
            for x in 0..self.state.width as i32 {
                if pred(self.state.tile(x, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Counters currently holding an item matching `pred`.
    pub fn counters_with(&self, pred: impl Fn(Item) -> bool) -> Vec<(i32, i32)> {
        self.state
            .counter_items
            .iter()
            .filter(|(_, item)| pred(**item))
            .map(|(pos, _)| *pos)
            .collect()
    }

    /// Free counter tiles (no item parked on them).
    pub fn free_counters(&self) -> Vec<(i32, i32)> {
        self.tiles_where(|t| t == Tile::Counter)
            .into_iter()
            .filter(|pos| !self.state.counter_items.contains_key(pos))
            .collect()
    }

    /// Nearest reachable position from a list, with its route distance.
    pub fn nearest_reachable(&self, positions: &[(i32, i32)]) -> Option<((i32, i32), u32)> {
        let mut best: Option<((i32, i32), u32)> = None;
        for &p in positions {
            if let Some(d) = self.reach(p) {
                let better = match best {
                    None => true,
                    Some((bp, bd)) => d < bd || (d == bd && (p.1, p.0) < (bp.1, bp.0)),
                };
                if better {
                    best = Some((p, d));
                }
            }
        }
        best
    }

    /// Free counter reachable by this seat that lies closest (Manhattan) to
    /// `dest` — the hand-off drop point toward an unreachable destination.
    /// Counters the partner can also get at are strongly preferred, so
    /// hand-offs land on shared boundaries instead of stranding items.
    pub fn handoff_counter_toward(&self, dest: (i32, i32)) -> Option<(i32, i32)> {
        let partner = self.state.players[1 - self.seat].pos;
        let mut best: Option<((i32, i32), (i32, i32))> = None;
        for pos in self.free_counters() {
            if self.reach(pos).is_none() {
                continue;
            }
            let shared = route_adjacent(self.state, partner, pos, None).is_some();
            // Rank: shared counters first, then proximity to the destination.
            let key = (if shared { 0 } else { 1 }, manhattan(pos, dest));
            let better = match best {
                None => true,
                Some((bp, bk)) => key < bk || (key == bk && (pos.1, pos.0) < (bp.1, bp.0)),
            };
            if better {
                best = Some((pos, key));
            }
        }
        best.map(|(p, _)| p)
    }
}

/// What an empty plate (or partial rice dish) can take from a ready station.
pub fn plate_accepts(contents: PlateContents, kind: StationKind) -> bool {
    matches!(
        (contents, kind),
        (PlateContents::Empty, StationKind::Pot)
            | (PlateContents::Empty, StationKind::RiceCooker)
            | (PlateContents::Empty, StationKind::Grill)
            | (PlateContents::Rice, StationKind::Grill)
            | (PlateContents::Protein, StationKind::RiceCooker)
    )
}

/// Ingredient wanted by the station serving `recipe` demand, if the station
/// can take more.
pub fn station_accepting(state: &GameState, kind: StationKind) -> bool {
    let s = state
        .stations
        .iter()
        .find(|s| s.kind == kind)
        .expect("one station per kind");
    matches!(s.phase, StationPhase::Idle) && s.contents.len() < kind.capacity()
}

pub fn ingredient_station(kind: IngredientKind) -> StationKind {
    match kind {
        IngredientKind::Onion => StationKind::Pot,
        IngredientKind::Rice => StationKind::RiceCooker,
        IngredientKind::Protein => StationKind::Grill,
    }
}
