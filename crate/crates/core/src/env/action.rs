//! Primitive control actions and the high-level macro-action vocabulary.

use serde::{Deserialize, Serialize};

/// The fixed six-action control set shared by both players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[repr(u8)]
pub enum PrimitiveAction {
    Up = 0,
    Down = 1,
    Left = 2,
    Right = 3,
    Stay = 4,
    Interact = 5,
}

pub const ACTION_COUNT: usize = 6;

impl PrimitiveAction {
    pub const ALL: [PrimitiveAction; ACTION_COUNT] = [
        PrimitiveAction::Up,
        PrimitiveAction::Down,
        PrimitiveAction::Left,
        PrimitiveAction::Right,
        PrimitiveAction::Stay,
        PrimitiveAction::Interact,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<PrimitiveAction> {
        Self::ALL.get(i).copied()
    }

    pub fn movement(self) -> Option<Orientation> {
        match self {
            PrimitiveAction::Up => Some(Orientation::North),
            PrimitiveAction::Down => Some(Orientation::South),
            PrimitiveAction::Left => Some(Orientation::West),
            PrimitiveAction::Right => Some(Orientation::East),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    North,
    South,
    West,
    East,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [
        Orientation::North,
        Orientation::South,
        Orientation::West,
        Orientation::East,
    ];

    /// (dx, dy) with y growing downward.
    pub fn delta(self) -> (i32, i32) {
        match self {
            Orientation::North => (0, -1),
            Orientation::South => (0, 1),
            Orientation::West => (-1, 0),
            Orientation::East => (1, 0),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Orientation::North => 0,
            Orientation::South => 1,
            Orientation::West => 2,
            Orientation::East => 3,
        }
    }
}

/// High-level action vocabulary. Fixed at exactly ten labels: this is the
/// decoder's output alphabet and the unit at which partner behavior is
/// predicted and inferred.
///
/// Loads are a single label (the loaded ingredient is already visible from
/// the preceding pick), while counter placement gets its own label because
/// hand-offs over counters are the core coordination behavior on split
/// layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[repr(u8)]
pub enum MacroAction {
    Idle = 0,
    PickOnion = 1,
    PickRice = 2,
    PickProtein = 3,
    PickPlate = 4,
    PlaceCounter = 5,
    LoadStation = 6,
    PlateDish = 7,
    Deliver = 8,
    Trash = 9,
}

pub const MACRO_COUNT: usize = 10;

impl MacroAction {
    pub const ALL: [MacroAction; MACRO_COUNT] = [
        MacroAction::Idle,
        MacroAction::PickOnion,
        MacroAction::PickRice,
        MacroAction::PickProtein,
        MacroAction::PickPlate,
        MacroAction::PlaceCounter,
        MacroAction::LoadStation,
        MacroAction::PlateDish,
        MacroAction::Deliver,
        MacroAction::Trash,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<MacroAction> {
        Self::ALL.get(i).copied()
    }
}
