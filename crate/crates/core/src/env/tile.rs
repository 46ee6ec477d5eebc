//! Static tile kinds and the items that move between them.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IngredientKind {
    Onion,
    Rice,
    Protein,
}

impl IngredientKind {
    pub const ALL: [IngredientKind; 3] = [
        IngredientKind::Onion,
        IngredientKind::Rice,
        IngredientKind::Protein,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationKind {
    Pot,
    RiceCooker,
    Grill,
}

impl StationKind {
    pub const ALL: [StationKind; 3] = [
        StationKind::Pot,
        StationKind::RiceCooker,
        StationKind::Grill,
    ];

    /// Ingredient this station accepts.
    pub fn input(self) -> IngredientKind {
        match self {
            StationKind::Pot => IngredientKind::Onion,
            StationKind::RiceCooker => IngredientKind::Rice,
            StationKind::Grill => IngredientKind::Protein,
        }
    }

    /// Ingredients required before cooking starts.
    pub fn capacity(self) -> usize {
        match self {
            StationKind::Pot => 3,
            StationKind::RiceCooker => 1,
            StationKind::Grill => 1,
        }
    }

    /// Ticks from full to ready.
    pub fn cook_ticks(self) -> u32 {
        match self {
            StationKind::Pot => 60,
            StationKind::RiceCooker => 50,
            StationKind::Grill => 40,
        }
    }
}

/// Ticks a ready station survives before its contents burn.
pub const BURN_WINDOW_TICKS: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    Soup,
    RiceDish,
}

impl Recipe {
    pub const ALL: [Recipe; 2] = [Recipe::Soup, Recipe::RiceDish];
}

/// What sits on a plate. `Rice` and `Protein` are intermediate states of a
/// rice dish; `Soup` and `RiceDish` are deliverable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlateContents {
    Empty,
    Soup,
    Rice,
    Protein,
    RiceDish,
}

impl PlateContents {
    pub fn completed_recipe(self) -> Option<Recipe> {
        match self {
            PlateContents::Soup => Some(Recipe::Soup),
            PlateContents::RiceDish => Some(Recipe::RiceDish),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Item {
    Ingredient(IngredientKind),
    Plate(PlateContents),
    Burnt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tile {
    Floor,
    Counter,
    IngredientSource(IngredientKind),
    PlateStack,
    DeliveryWindow,
    StationSlot(StationKind),
    Trash,
}

impl Tile {
    pub fn walkable(self) -> bool {
        matches!(self, Tile::Floor)
    }
}
