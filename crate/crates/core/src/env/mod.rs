//! The kitchen: a deterministic, seedable two-player cooperative cooking
//! gridworld with timed orders, three cooking stations, two recipes, and
//! burn risk.

pub mod action;
pub mod events;
pub mod layout;
pub mod macro_label;
pub mod observe;
pub mod state;
pub mod tile;

pub use action::{MacroAction, Orientation, PrimitiveAction, ACTION_COUNT, MACRO_COUNT};
pub use events::Event;
pub use layout::{Layout, OrderSchedule, BUILTIN_LAYOUTS, LAYOUT_FORMAT_VERSION};
pub use macro_label::{label_events, MacroTracker, IDLE_THRESHOLD_TICKS};
pub use observe::{observe, OBS_LEN};
pub use state::{load_layout, GameState, Order, PlayerState, StationPhase, StationState};
pub use tile::{
    IngredientKind, Item, PlateContents, Recipe, StationKind, Tile, BURN_WINDOW_TICKS,
};

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use rand::Rng;

    use super::*;
    use crate::rng;

    fn fresh(name: &str, seed: u64) -> GameState {
        load_layout(name, seed).unwrap()
    }

    /// Flood fill over walkable tiles.
    fn reachable_from(state: &GameState, start: (i32, i32)) -> HashSet<(i32, i32)> {
        let mut seen = HashSet::new();
        let mut stack = vec![start];
        while let Some((x, y)) = stack.pop() {
            if !seen.insert((x, y)) {
                continue;
            }
            for (dx, dy) in [(0, 1), (0, -1), (1, 0), (-1, 0)] {
                let (nx, ny) = (x + dx, y + dy);
                if state.tile(nx, ny).walkable() && !seen.contains(&(nx, ny)) {
                    stack.push((nx, ny));
                }
            }
        }
        seen
    }

    #[test]
    fn load_layout_open_has_players_stations_orders() {
        let s = fresh("open", 1);
        assert_eq!(s.players.len(), 2);
        assert_eq!(s.stations.len(), 3);
        assert!(!s.orders.is_empty());
        assert_ne!(s.players[0].pos, s.players[1].pos);
    }

    #[test]
    fn load_layout_same_seed_identical() {
        assert_eq!(fresh("ring", 42), fresh("ring", 42));
    }

    #[test]
    fn forced_coord_separates_players() {
        let s = fresh("forced_coord", 0);
        let region = reachable_from(&s, s.players[0].pos);
        assert!(
            !region.contains(&s.players[1].pos),
            "players must not share a walkable region on forced_coord"
        );
        // The other layouts are connected.
        for name in ["open", "hallway", "ring"] {
            let s = fresh(name, 0);
            let region = reachable_from(&s, s.players[0].pos);
            assert!(region.contains(&s.players[1].pos), "{name} should connect");
        }
    }

    #[test]
    fn both_stay_decrements_timers_only() {
        let mut s = fresh("open", 7);
        let before = s.clone();
        let (reward, _) = s.step([PrimitiveAction::Stay, PrimitiveAction::Stay]);
        assert_eq!(reward, [0, 0]);
        assert_eq!(s.players[0].pos, before.players[0].pos);
        assert_eq!(s.players[1].pos, before.players[1].pos);
        for (a, b) in before.orders.iter().zip(&s.orders) {
            assert_eq!(a.time_remaining, b.time_remaining + 1);
        }
        assert_eq!(s.tick, before.tick + 1);
    }

    #[test]
    fn swap_through_is_forbidden() {
        // Put the players side by side and command a swap.
        let mut s = fresh("open", 3);
        s.players[0].pos = (4, 4);
        s.players[1].pos = (5, 4);
        let before = [s.players[0].pos, s.players[1].pos];
        s.step([PrimitiveAction::Right, PrimitiveAction::Left]);
        assert_eq!([s.players[0].pos, s.players[1].pos], before);
    }

    #[test]
    fn contested_tile_goes_to_player_zero() {
        let mut s = fresh("open", 3);
        s.players[0].pos = (4, 4);
        s.players[1].pos = (6, 4);
        s.step([PrimitiveAction::Right, PrimitiveAction::Left]);
        assert_eq!(s.players[0].pos, (5, 4));
        assert_eq!(s.players[1].pos, (6, 4));
    }

    #[test]
    fn blocked_move_still_turns() {
        let mut s = fresh("open", 3);
        s.players[0].pos = (1, 1); // next to the top wall
        s.step([PrimitiveAction::Up, PrimitiveAction::Stay]);
        assert_eq!(s.players[0].pos, (1, 1));
        assert_eq!(s.players[0].orientation, Orientation::North);
    }

    #[test]
    fn train_following_is_allowed() {
        let mut s = fresh("open", 3);
        s.players[0].pos = (4, 4);
        s.players[1].pos = (5, 4);
        s.step([PrimitiveAction::Right, PrimitiveAction::Right]);
        assert_eq!(s.players[0].pos, (5, 4));
        assert_eq!(s.players[1].pos, (6, 4));
    }

    #[test]
    fn moving_onto_stationary_player_is_blocked() {
        let mut s = fresh("open", 3);
        s.players[0].pos = (4, 4);
        s.players[1].pos = (5, 4);
        s.step([PrimitiveAction::Right, PrimitiveAction::Stay]);
        assert_eq!(s.players[0].pos, (4, 4));
        assert_eq!(s.players[1].pos, (5, 4));
    }

    /// Drive one player through pick→load→cook→plate→deliver for soup and
    /// check the bonus reward arithmetic.
    #[test]
    fn soup_delivery_with_bonus() {
        let layout = layout::builtin("open").unwrap();
        let mut s = GameState::new(&layout, 9);
        // Guarantee a soup order is open.
        s.orders.clear();
        s.orders.push(Order {
            id: 99,
            recipe: Recipe::Soup,
            time_remaining: 300,
            time_limit: 300,
            bonus_window: 150,
            base_reward: 20,
            bonus_reward: 10,
        });

        // Teleport-style setup: stand next to the pot with onions.
        let pot = s.stations[0].pos;
        assert_eq!(s.stations[0].kind, StationKind::Pot);
        let below = (pot.0, pot.1 + 1);
        assert!(s.tile(below.0, below.1).walkable());
        s.players[0].pos = below;
        s.players[1].pos = (9, 6);

        for i in 0..3 {
            s.players[0].held = Some(Item::Ingredient(IngredientKind::Onion));
            s.players[0].orientation = Orientation::North;
            let (_, ev) = s.step([PrimitiveAction::Interact, PrimitiveAction::Stay]);
            assert!(
                ev.iter().any(|e| matches!(e, Event::LoadedStation { .. })),
                "load {i} failed: {ev:?}"
            );
        }
        assert!(matches!(s.stations[0].phase, StationPhase::Cooking { .. }));

        // Wait for ready.
        while !matches!(s.stations[0].phase, StationPhase::Ready { .. }) {
            s.step([PrimitiveAction::Stay, PrimitiveAction::Stay]);
        }

        // Plate it.
        s.players[0].held = Some(Item::Plate(PlateContents::Empty));
        s.players[0].orientation = Orientation::North;
        let (_, ev) = s.step([PrimitiveAction::Interact, PrimitiveAction::Stay]);
        assert!(ev.iter().any(|e| matches!(e, Event::PlatedFromStation { .. })));
        assert_eq!(s.players[0].held, Some(Item::Plate(PlateContents::Soup)));

        // Deliver while the order is still inside its bonus window.
        assert!(s.orders[0].bonus_active());
        let delivery = s
            .tiles
            .iter()
            .position(|t| *t == Tile::DeliveryWindow)
            .unwrap();
        let dpos = ((delivery % s.width) as i32, (delivery / s.width) as i32);
        let above = (dpos.0, dpos.1 - 1);
        assert!(s.tile(above.0, above.1).walkable());
        s.players[0].pos = above;
        s.players[0].orientation = Orientation::South;
        let (reward, ev) = s.step([PrimitiveAction::Interact, PrimitiveAction::Stay]);
        assert_eq!(reward, [30, 30], "base 20 + bonus 10, common payoff");
        assert!(ev
            .iter()
            .any(|e| matches!(e, Event::Delivered { bonus: true, .. })));
        assert_eq!(s.score, 30);
        assert_eq!(s.players[0].held, None);
    }

    /// Station state machine oracle: enumerate a tick trace and assert the
    /// exact idle→cooking→ready→burnt timing.
    #[test]
    fn station_burns_after_burn_window() {
        let layout = layout::builtin("open").unwrap();
        let mut s = GameState::new(&layout, 9).with_episode_ticks(4000);
        let grill = s.stations[2].pos;
        assert_eq!(s.stations[2].kind, StationKind::Grill);
        let below = (grill.0, grill.1 + 1);
        s.players[0].pos = below;
        s.players[0].held = Some(Item::Ingredient(IngredientKind::Protein));
        s.players[0].orientation = Orientation::North;
        s.step([PrimitiveAction::Interact, PrimitiveAction::Stay]);
        assert_eq!(
            s.stations[2].phase,
            StationPhase::Cooking {
                ticks_left: StationKind::Grill.cook_ticks()
            }
        );

        // Independent expectation: ready exactly after cook_ticks(), burnt
        // exactly BURN_WINDOW_TICKS later.
        for t in 1..StationKind::Grill.cook_ticks() {
            s.step([PrimitiveAction::Stay, PrimitiveAction::Stay]);
            assert_eq!(
                s.stations[2].phase,
                StationPhase::Cooking {
                    ticks_left: StationKind::Grill.cook_ticks() - t
                },
            );
        }
        s.step([PrimitiveAction::Stay, PrimitiveAction::Stay]);
        assert_eq!(s.stations[2].phase, StationPhase::Ready { ticks_since: 0 });
        for t in 1..BURN_WINDOW_TICKS {
            s.step([PrimitiveAction::Stay, PrimitiveAction::Stay]);
            assert_eq!(s.stations[2].phase, StationPhase::Ready { ticks_since: t });
        }
        let (_, ev) = s.step([PrimitiveAction::Stay, PrimitiveAction::Stay]);
        assert_eq!(s.stations[2].phase, StationPhase::Burnt);
        assert!(ev.iter().any(|e| matches!(e, Event::StationBurnt { .. })));

        // Burnt contents can only be collected empty-handed and trashed.
        s.players[0].held = Some(Item::Plate(PlateContents::Empty));
        let (_, ev) = s.step([PrimitiveAction::Interact, PrimitiveAction::Stay]);
        assert!(ev.iter().any(|e| matches!(e, Event::IllegalInteract { .. })));
        s.players[0].held = None;
        let (_, ev) = s.step([PrimitiveAction::Interact, PrimitiveAction::Stay]);
        assert!(ev.iter().any(|e| matches!(e, Event::CollectedBurnt { .. })));
        assert_eq!(s.players[0].held, Some(Item::Burnt));
        assert_eq!(s.stations[2].phase, StationPhase::Idle);
    }

    #[test]
    fn orders_expire_with_zero_reward() {
        let layout = layout::builtin("open").unwrap();
        let mut s = GameState::new(&layout, 5).with_episode_ticks(5000);
        let id = s.orders[0].id;
        let remaining = s.orders[0].time_remaining;
        let score_before = s.score;
        let mut expired = false;
        for _ in 0..remaining {
            let (_, ev) = s.step([PrimitiveAction::Stay, PrimitiveAction::Stay]);
            expired |= ev.iter().any(|e| matches!(e, Event::OrderExpired { .. }));
        }
        assert!(expired);
        assert!(s.orders.iter().all(|o| o.id != id));
        assert_eq!(s.score, score_before);
        assert!(s.orders.iter().all(|o| o.time_remaining > 0));
    }

    #[test]
    fn observe_is_pure_and_bounded() {
        let mut s = fresh("hallway", 11);
        let mut r = rng::rng(11, 1);
        for _ in 0..200 {
            let a0 = PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)];
            let a1 = PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)];
            s.step([a0, a1]);
            for p in 0..2 {
                let v1 = observe(&s, p);
                let v2 = observe(&s, p);
                assert_eq!(v1, v2);
                assert_eq!(v1.len(), OBS_LEN);
                assert!(v1.iter().all(|x| (-1.0..=1.0).contains(x)));
            }
        }
    }

    #[test]
    fn observe_swaps_with_player_index() {
        let mut s = fresh("ring", 13);
        let mut r = rng::rng(13, 2);
        for _ in 0..100 {
            let a0 = PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)];
            let a1 = PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)];
            s.step([a0, a1]);
            let swapped = s.swap_players();
            assert_eq!(observe(&s, 1), observe(&swapped, 0));
            assert_eq!(observe(&s, 0), observe(&swapped, 1));
        }
    }

    #[test]
    fn replays_are_bit_identical() {
        for (i, name) in BUILTIN_LAYOUTS.iter().enumerate() {
            let seed = 1000 + i as u64;
            let mut r = rng::rng(seed, 3);
            let actions: Vec<[PrimitiveAction; 2]> = (0..300)
                .map(|_| {
                    [
                        PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)],
                        PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)],
                    ]
                })
                .collect();
            let run = |mut s: GameState| {
                let mut trace = Vec::new();
                let mut rewards = Vec::new();
                for &a in &actions {
                    let (rw, _) = s.step(a);
                    trace.push(s.clone());
                    rewards.push(rw);
                }
                (trace, rewards)
            };
            let (t1, r1) = run(fresh(name, seed));
            let (t2, r2) = run(fresh(name, seed));
            assert_eq!(t1, t2, "trace mismatch on {name}");
            assert_eq!(r1, r2);
        }
    }

    #[test]
    fn rewards_are_common_payoff_and_score_matches() {
        // Random play on every layout: reward[0] == reward[1] at every tick
        // and the final score equals the summed reward stream.
        for name in BUILTIN_LAYOUTS {
            let mut s = fresh(name, 77);
            let mut r = rng::rng(77, 4);
            let mut total = 0i32;
            for _ in 0..s.episode_ticks {
                let a0 = PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)];
                let a1 = PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)];
                let (rw, _) = s.step([a0, a1]);
                assert_eq!(rw[0], rw[1]);
                total += rw[0];
            }
            assert_eq!(s.score, total, "score must equal summed rewards on {name}");
        }
    }

    #[test]
    fn order_timers_strictly_decrease_until_removal() {
        let mut s = fresh("open", 21);
        let mut last: std::collections::HashMap<u32, u32> =
            s.orders.iter().map(|o| (o.id, o.time_remaining)).collect();
        for _ in 0..350 {
            s.step([PrimitiveAction::Stay, PrimitiveAction::Stay]);
            for o in &s.orders {
                if let Some(prev) = last.get(&o.id) {
                    assert_eq!(o.time_remaining, prev - 1);
                }
            }
            last = s.orders.iter().map(|o| (o.id, o.time_remaining)).collect();
        }
    }

    #[test]
    #[should_panic(expected = "terminal")]
    fn step_on_terminal_state_panics() {
        let layout = layout::builtin("open").unwrap();
        let mut s = GameState::new(&layout, 1).with_episode_ticks(1);
        s.step([PrimitiveAction::Stay, PrimitiveAction::Stay]);
        s.step([PrimitiveAction::Stay, PrimitiveAction::Stay]);
    }

    /// Conservation: item count (held + countered + station contents) changes
    /// only through source pickups, plating merges, deliveries, and trash.
    #[test]
    fn item_conservation_under_random_play() {
        let mut s = fresh("open", 31);
        let mut r = rng::rng(31, 5);
        let count_items = |s: &GameState| -> i64 {
            let held = s.players.iter().filter(|p| p.held.is_some()).count();
            let countered = s.counter_items.len();
            let stationed: usize = s.stations.iter().map(|st| st.contents.len()).sum();
            (held + countered + stationed) as i64
        };
        let mut expected = count_items(&s);
        for _ in 0..s.episode_ticks {
            let a0 = PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)];
            let a1 = PrimitiveAction::ALL[r.gen_range(0..ACTION_COUNT)];
            let (_, events) = s.step([a0, a1]);
            for e in &events {
                match e {
                    Event::PickedFromSource { .. } | Event::PickedPlateFromStack { .. } => {
                        expected += 1
                    }
                    Event::Delivered { .. } | Event::Trashed { .. } => expected -= 1,
                    // Plating folds the station's (full) contents onto the
                    // already-counted plate.
                    Event::PlatedFromStation { station_kind, .. } => {
                        expected -= station_kind.capacity() as i64
                    }
                    // Collecting burnt contents yields one held item for the
                    // station's full load.
                    Event::CollectedBurnt { station, .. } => {
                        expected += 1 - s.stations[*station].kind.capacity() as i64
                    }
                    _ => {}
                }
            }
            assert_eq!(count_items(&s), expected, "conservation broke");
        }
    }
}
