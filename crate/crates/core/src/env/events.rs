//! Per-tick event records emitted by [`GameState::step`](super::GameState::step).
//!
//! Events are the ground truth for macro-action labeling, reward shaping in
//! trainers, and the conservation audits in tests.

use serde::{Deserialize, Serialize};

use super::action::MacroAction;
use super::tile::{IngredientKind, Item, Recipe, StationKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    PickedFromSource {
        player: usize,
        ingredient: IngredientKind,
    },
    PickedPlateFromStack {
        player: usize,
    },
    PickedFromCounter {
        player: usize,
        item: Item,
    },
    PlacedOnCounter {
        player: usize,
        item: Item,
    },
    LoadedStation {
        player: usize,
        station: usize,
        station_kind: StationKind,
    },
    PlatedFromStation {
        player: usize,
        station: usize,
        station_kind: StationKind,
    },
    CollectedBurnt {
        player: usize,
        station: usize,
    },
    Delivered {
        player: usize,
        recipe: Recipe,
        reward: i32,
        bonus: bool,
    },
    Trashed {
        player: usize,
        item: Item,
    },
    IllegalInteract {
        player: usize,
    },
    StationStartedCooking {
        station: usize,
    },
    StationReady {
        station: usize,
    },
    StationBurnt {
        station: usize,
    },
    OrderSpawned {
        recipe: Recipe,
    },
    OrderExpired {
        recipe: Recipe,
    },
}

impl Event {
    /// Player that performed this event, if it is a player action.
    pub fn player(&self) -> Option<usize> {
        match *self {
            Event::PickedFromSource { player, .. }
            | Event::PickedPlateFromStack { player }
            | Event::PickedFromCounter { player, .. }
            | Event::PlacedOnCounter { player, .. }
            | Event::LoadedStation { player, .. }
            | Event::PlatedFromStation { player, .. }
            | Event::CollectedBurnt { player, .. }
            | Event::Delivered { player, .. }
            | Event::Trashed { player, .. }
            | Event::IllegalInteract { player } => Some(player),
            _ => None,
        }
    }

    /// Macro-action label this event maps to, if any. Burnt-item collection
    /// and illegal interacts carry no label (the subsequent trash does).
    pub fn macro_label(&self) -> Option<MacroAction> {
        match *self {
            Event::PickedFromSource { ingredient, .. } => Some(match ingredient {
                IngredientKind::Onion => MacroAction::PickOnion,
                IngredientKind::Rice => MacroAction::PickRice,
                IngredientKind::Protein => MacroAction::PickProtein,
            }),
            Event::PickedPlateFromStack { .. } => Some(MacroAction::PickPlate),
            Event::PickedFromCounter { item, .. } => match item {
                Item::Ingredient(IngredientKind::Onion) => Some(MacroAction::PickOnion),
                Item::Ingredient(IngredientKind::Rice) => Some(MacroAction::PickRice),
                Item::Ingredient(IngredientKind::Protein) => Some(MacroAction::PickProtein),
                Item::Plate(_) => Some(MacroAction::PickPlate),
                Item::Burnt => None,
            },
            Event::PlacedOnCounter { .. } => Some(MacroAction::PlaceCounter),
            Event::LoadedStation { .. } => Some(MacroAction::LoadStation),
            Event::PlatedFromStation { .. } => Some(MacroAction::PlateDish),
            Event::Delivered { .. } => Some(MacroAction::Deliver),
            Event::Trashed { .. } => Some(MacroAction::Trash),
            _ => None,
        }
    }
}
