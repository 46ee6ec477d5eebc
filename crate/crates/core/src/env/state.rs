//! Game state and the tick transition function.
//!
//! `GameState` is a plain value: stepping consumes nothing and mutates under
//! exclusive access. All fields are integers, so identical (layout, seed,
//! action sequence) yields bit-identical traces, checkable via `Eq`/`Hash`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::action::{Orientation, PrimitiveAction};
use super::events::Event;
use super::layout::{Layout, OrderSchedule};
use super::tile::{IngredientKind, Item, PlateContents, Recipe, StationKind, Tile, BURN_WINDOW_TICKS};
use crate::error::Result;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlayerState {
    pub pos: (i32, i32),
    pub orientation: Orientation,
    pub held: Option<Item>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum StationPhase {
    Idle,
    Cooking { ticks_left: u32 },
    Ready { ticks_since: u32 },
    Burnt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StationState {
    pub kind: StationKind,
    pub pos: (i32, i32),
    pub contents: Vec<IngredientKind>,
    pub phase: StationPhase,
}

impl StationState {
    /// Remaining cook ticks, 0 unless cooking.
    pub fn cook_timer(&self) -> u32 {
        match self.phase {
            StationPhase::Cooking { ticks_left } => ticks_left,
            _ => 0,
        }
    }

    fn accepts(&self, item: IngredientKind) -> bool {
        matches!(self.phase, StationPhase::Idle)
            && item == self.kind.input()
            && self.contents.len() < self.kind.capacity()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Order {
    pub id: u32,
    pub recipe: Recipe,
    pub time_remaining: u32,
    pub time_limit: u32,
    pub bonus_window: u32,
    pub base_reward: i32,
    pub bonus_reward: i32,
}

impl Order {
    /// True while a delivery would still earn the bonus.
    pub fn bonus_active(&self) -> bool {
        self.time_limit - self.time_remaining < self.bonus_window
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameState {
    pub layout_name: String,
    pub layout_version: u32,
    pub width: usize,
    pub height: usize,
    pub tiles: Vec<Tile>,
    pub players: [PlayerState; 2],
    pub stations: Vec<StationState>,
    /// Items resting on counters, keyed by position.
    pub counter_items: BTreeMap<(i32, i32), Item>,
    pub orders: Vec<Order>,
    pub tick: u32,
    pub episode_ticks: u32,
    pub score: i32,
    pub rng_seed: u64,
    pub schedule: OrderSchedule,
    next_order_id: u32,
    spawned_orders: u32,
}

/// Seed stream tag for order recipe draws.
const ORDER_STREAM: u64 = 0x6f72646572;

impl GameState {
    pub fn new(layout: &Layout, seed: u64) -> GameState {
        let players = [0, 1].map(|i| PlayerState {
            pos: layout.starts[i],
            orientation: Orientation::South,
            held: None,
        });
        let stations = layout
            .stations
            .iter()
            .map(|&(kind, pos)| StationState {
                kind,
                pos,
                contents: Vec::new(),
                phase: StationPhase::Idle,
            })
            .collect();
        let mut state = GameState {
            layout_name: layout.name.clone(),
            layout_version: layout.version,
            width: layout.width,
            height: layout.height,
            tiles: layout.tiles.clone(),
            players,
            stations,
            counter_items: BTreeMap::new(),
            orders: Vec::new(),
            tick: 0,
            episode_ticks: layout.episode_ticks,
            score: 0,
            rng_seed: seed,
            schedule: layout.schedule,
            next_order_id: 0,
            spawned_orders: 0,
        };
        for _ in 0..layout.schedule.initial_orders {
            state.spawn_order();
        }
        state
    }

    pub fn with_episode_ticks(mut self, ticks: u32) -> GameState {
        self.episode_ticks = ticks;
        self
    }

    pub fn tile(&self, x: i32, y: i32) -> Tile {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return Tile::Counter;
        }
        self.tiles[y as usize * self.width + x as usize]
    }

    pub fn in_bounds(&self, x: i32, y: i32) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    pub fn is_terminal(&self) -> bool {
        self.tick >= self.episode_ticks
    }

    pub fn ticks_remaining(&self) -> u32 {
        self.episode_ticks.saturating_sub(self.tick)
    }

    /// The state with player seats exchanged. Useful for seat-symmetry
    /// checks: `observe(swapped, 0) == observe(original, 1)`.
    pub fn swap_players(&self) -> GameState {
        let mut s = self.clone();
        s.players.swap(0, 1);
        s
    }

    fn spawn_order(&mut self) -> Recipe {
        let draw = rng::mix(self.rng_seed, ORDER_STREAM.wrapping_add(self.spawned_orders as u64));
        let recipe = if draw & 1 == 0 { Recipe::Soup } else { Recipe::RiceDish };
        let s = self.schedule;
        self.orders.push(Order {
            id: self.next_order_id,
            recipe,
            time_remaining: s.time_limit,
            time_limit: s.time_limit,
            bonus_window: s.bonus_window,
            base_reward: s.base_reward,
            bonus_reward: s.bonus_reward,
        });
        self.next_order_id += 1;
        self.spawned_orders += 1;
        recipe
    }

    /// Advance one tick. Movement resolves first (swap forbidden, contested
    /// tiles go to the lower player index), then interacts in player order,
    /// then station and order timers, then scheduled order spawns.
    ///
    /// Rewards are common-payoff: both entries always carry the identical
    /// team reward earned this tick. Illegal interacts are no-ops recorded
    /// as events.
    ///
    /// Panics if called on a terminal state.
    pub fn step(&mut self, joint_action: [PrimitiveAction; 2]) -> ([i32; 2], Vec<Event>) {
        assert!(
            !self.is_terminal(),
            "step called on terminal state (tick {} of {})",
            self.tick,
            self.episode_ticks
        );
        let mut events = Vec::new();
        let mut reward = 0i32;

        self.resolve_movement(joint_action);

        for i in 0..2 {
            if joint_action[i] == PrimitiveAction::Interact {
                reward += self.resolve_interact(i, &mut events);
            }
        }

        self.advance_stations(&mut events);
        self.advance_orders(&mut events);

        self.tick += 1;
        if self.tick % self.schedule.interval == 0
            && (self.orders.len() as u32) < self.schedule.max_concurrent
        {
            let recipe = self.spawn_order();
            events.push(Event::OrderSpawned { recipe });
        }

        ([reward, reward], events)
    }

    fn resolve_movement(&mut self, joint_action: [PrimitiveAction; 2]) {
        let start = [self.players[0].pos, self.players[1].pos];
        let mut target = start;
        for i in 0..2 {
            if let Some(dir) = joint_action[i].movement() {
                // Facing changes even when the move is blocked.
                self.players[i].orientation = dir;
                let (dx, dy) = dir.delta();
                let t = (start[i].0 + dx, start[i].1 + dy);
                if self.tile(t.0, t.1).walkable() {
                    target[i] = t;
                }
            }
        }

        // Contested tile: a player already standing there wins; otherwise
        // player 0 wins and player 1 stays.
        if target[0] == target[1] {
            if target[1] == start[1] {
                target[0] = start[0];
            } else {
                target[1] = start[1];
            }
        }
        // Swapping through each other is forbidden.
        if target[0] == start[1] && target[1] == start[0] {
            target = start;
        }
        // Moving onto a player that ends up not vacating is blocked; two
        // passes reach the fixpoint.
        for _ in 0..2 {
            if target[0] == start[1] && target[1] == start[1] {
                target[0] = start[0];
            }
            if target[1] == start[0] && target[0] == start[0] {
                target[1] = start[1];
            }
        }

        self.players[0].pos = target[0];
        self.players[1].pos = target[1];
    }

    fn faced_tile(&self, player: usize) -> (i32, i32) {
        let p = &self.players[player];
        let (dx, dy) = p.orientation.delta();
        (p.pos.0 + dx, p.pos.1 + dy)
    }

    fn resolve_interact(&mut self, player: usize, events: &mut Vec<Event>) -> i32 {
        let pos = self.faced_tile(player);
        let held = self.players[player].held;
        let mut reward = 0i32;

        let illegal = |events: &mut Vec<Event>| {
            events.push(Event::IllegalInteract { player });
        };

        match self.tile(pos.0, pos.1) {
            Tile::IngredientSource(kind) => {
                if held.is_none() {
                    self.players[player].held = Some(Item::Ingredient(kind));
                    events.push(Event::PickedFromSource {
                        player,
                        ingredient: kind,
                    });
                } else {
                    illegal(events);
                }
            }
            Tile::PlateStack => {
                if held.is_none() {
                    self.players[player].held = Some(Item::Plate(PlateContents::Empty));
                    events.push(Event::PickedPlateFromStack { player });
                } else {
                    illegal(events);
                }
            }
            Tile::Counter => match (held, self.counter_items.get(&pos).copied()) {
                (None, Some(item)) => {
                    self.counter_items.remove(&pos);
                    self.players[player].held = Some(item);
                    events.push(Event::PickedFromCounter { player, item });
                }
                (Some(item), None) => {
                    self.counter_items.insert(pos, item);
                    self.players[player].held = None;
                    events.push(Event::PlacedOnCounter { player, item });
                }
                _ => illegal(events),
            },
            Tile::StationSlot(_) => {
                let idx = self
                    .stations
                    .iter()
                    .position(|s| s.pos == pos)
                    .expect("station slot tile without station");
                reward += self.interact_station(player, idx, events);
            }
            Tile::DeliveryWindow => {
                let dish = held.and_then(|item| match item {
                    Item::Plate(contents) => contents.completed_recipe(),
                    _ => None,
                });
                match dish {
                    Some(recipe) => {
                        match self.orders.iter().position(|o| o.recipe == recipe) {
                            Some(oi) => {
                                let order = self.orders.remove(oi);
                                let bonus = order.bonus_active();
                                let r = order.base_reward
                                    + if bonus { order.bonus_reward } else { 0 };
                                self.score += r;
                                reward += r;
                                self.players[player].held = None;
                                events.push(Event::Delivered {
                                    player,
                                    recipe,
                                    reward: r,
                                    bonus,
                                });
                            }
                            None => illegal(events),
                        }
                    }
                    None => illegal(events),
                }
            }
            Tile::Trash => match held {
                Some(item) => {
                    self.players[player].held = None;
                    events.push(Event::Trashed { player, item });
                }
                None => illegal(events),
            },
            Tile::Floor => illegal(events),
        }
        reward
    }

    fn interact_station(&mut self, player: usize, idx: usize, events: &mut Vec<Event>) -> i32 {
        let held = self.players[player].held;
        let (kind, phase) = (self.stations[idx].kind, self.stations[idx].phase);
        match phase {
            StationPhase::Idle => {
                if let Some(Item::Ingredient(ing)) = held {
                    if self.stations[idx].accepts(ing) {
                        self.players[player].held = None;
                        self.stations[idx].contents.push(ing);
                        events.push(Event::LoadedStation {
                            player,
                            station: idx,
                            station_kind: kind,
                        });
                        if self.stations[idx].contents.len() == kind.capacity() {
                            self.stations[idx].phase = StationPhase::Cooking {
                                ticks_left: kind.cook_ticks(),
                            };
                            events.push(Event::StationStartedCooking { station: idx });
                        }
                        return 0;
                    }
                }
                events.push(Event::IllegalInteract { player });
            }
            StationPhase::Cooking { .. } => {
                events.push(Event::IllegalInteract { player });
            }
            StationPhase::Ready { .. } => {
                let upgraded = match held {
                    Some(Item::Plate(contents)) => plate_station(contents, kind),
                    _ => None,
                };
                match upgraded {
                    Some(next) => {
                        self.players[player].held = Some(Item::Plate(next));
                        self.stations[idx].contents.clear();
                        self.stations[idx].phase = StationPhase::Idle;
                        events.push(Event::PlatedFromStation {
                            player,
                            station: idx,
                            station_kind: kind,
                        });
                    }
                    None => events.push(Event::IllegalInteract { player }),
                }
            }
            StationPhase::Burnt => {
                if held.is_none() {
                    self.players[player].held = Some(Item::Burnt);
                    self.stations[idx].contents.clear();
                    self.stations[idx].phase = StationPhase::Idle;
                    events.push(Event::CollectedBurnt {
                        player,
                        station: idx,
                    });
                } else {
                    events.push(Event::IllegalInteract { player });
                }
            }
        }
        0
    }

    fn advance_stations(&mut self, events: &mut Vec<Event>) {
        for idx in 0..self.stations.len() {
            // A station loaded this tick starts counting next tick.
            if events
                .iter()
                .any(|e| matches!(e, Event::StationStartedCooking { station } if *station == idx))
            {
                continue;
            }
            match self.stations[idx].phase {
                StationPhase::Cooking { ticks_left } => {
                    let left = ticks_left - 1;
                    if left == 0 {
                        self.stations[idx].phase = StationPhase::Ready { ticks_since: 0 };
                        events.push(Event::StationReady { station: idx });
                    } else {
                        self.stations[idx].phase = StationPhase::Cooking { ticks_left: left };
                    }
                }
                StationPhase::Ready { ticks_since } => {
                    let since = ticks_since + 1;
                    if since >= BURN_WINDOW_TICKS {
                        self.stations[idx].phase = StationPhase::Burnt;
                        events.push(Event::StationBurnt { station: idx });
                    } else {
                        self.stations[idx].phase = StationPhase::Ready { ticks_since: since };
                    }
                }
                StationPhase::Idle | StationPhase::Burnt => {}
            }
        }
    }

    fn advance_orders(&mut self, events: &mut Vec<Event>) {
        let mut i = 0;
        while i < self.orders.len() {
            self.orders[i].time_remaining -= 1;
            if self.orders[i].time_remaining == 0 {
                let order = self.orders.remove(i);
                events.push(Event::OrderExpired {
                    recipe: order.recipe,
                });
            } else {
                i += 1;
            }
        }
    }
}

/// Plating transition table: what an interact with a ready station of `kind`
/// turns plate `contents` into. `None` means the combination is illegal.
fn plate_station(contents: PlateContents, kind: StationKind) -> Option<PlateContents> {
    match (contents, kind) {
        (PlateContents::Empty, StationKind::Pot) => Some(PlateContents::Soup),
        (PlateContents::Empty, StationKind::RiceCooker) => Some(PlateContents::Rice),
        (PlateContents::Empty, StationKind::Grill) => Some(PlateContents::Protein),
        (PlateContents::Rice, StationKind::Grill) => Some(PlateContents::RiceDish),
        (PlateContents::Protein, StationKind::RiceCooker) => Some(PlateContents::RiceDish),
        _ => None,
    }
}

/// Load a built-in layout into its initial state.
pub fn load_layout(name: &str, seed: u64) -> Result<GameState> {
    let layout = super::layout::load(name)?;
    Ok(GameState::new(&layout, seed))
}
