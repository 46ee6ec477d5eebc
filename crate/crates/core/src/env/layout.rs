//! Layout definitions: the plain-text map format, validation, and the four
//! built-in kitchens.
//!
//! A layout file is a header of `key value` lines followed by the grid:
//!
//! ```text
//! talents-layout v1
//! name open
//! episode_ticks 400
//! initial_orders 2
//! order_interval 80
//! order_max_concurrent 4
//! order_time 300
//! order_bonus_window 150
//! order_base_reward 20
//! order_bonus_reward 10
//! grid
//! XXXXpXcXgXXX
//! ...
//! end
//! ```
//!
//! Grid glyphs: `X` counter, `.` floor, `O`/`R`/`M` onion/rice/protein
//! sources, `P` plate stack, `D` delivery window, `T` trash, `p`/`c`/`g`
//! pot/rice-cooker/grill stations, `1`/`2` player start tiles (floor).

use serde::{Deserialize, Serialize};

use super::tile::{IngredientKind, StationKind, Tile};
use crate::error::{Error, Result};

pub const LAYOUT_FORMAT_VERSION: u32 = 1;

/// Order spawning parameters, fixed per layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderSchedule {
    /// Orders present in the initial state.
    pub initial_orders: u32,
    /// A spawn is attempted whenever `tick % interval == 0` (tick > 0).
    pub interval: u32,
    pub max_concurrent: u32,
    /// Ticks an order stays open.
    pub time_limit: u32,
    /// Delivery within the first `bonus_window` ticks of an order's life
    /// earns the bonus.
    pub bonus_window: u32,
    pub base_reward: i32,
    pub bonus_reward: i32,
}

impl Default for OrderSchedule {
    fn default() -> Self {
        OrderSchedule {
            initial_orders: 2,
            interval: 80,
            max_concurrent: 4,
            time_limit: 300,
            bonus_window: 150,
            base_reward: 20,
            bonus_reward: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layout {
    pub name: String,
    pub version: u32,
    pub width: usize,
    pub height: usize,
    pub tiles: Vec<Tile>,
    /// Player start positions, index 0 and 1.
    pub starts: [(i32, i32); 2],
    /// Station positions in fixed order pot, rice cooker, grill.
    pub stations: Vec<(StationKind, (i32, i32))>,
    pub schedule: OrderSchedule,
    pub episode_ticks: u32,
}

impl Layout {
    pub fn tile(&self, x: i32, y: i32) -> Tile {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return Tile::Counter;
        }
        self.tiles[y as usize * self.width + x as usize]
    }

    pub fn in_bounds(&self, x: i32, y: i32) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    /// All positions of a given tile predicate.
    pub fn positions_where(&self, pred: impl Fn(Tile) -> bool) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if pred(self.tiles[y * self.width + x]) {
                    out.push((x as i32, y as i32));
                }
            }
        }
        out
    }

    /// Parse the documented text format.
    pub fn parse(text: &str) -> Result<Layout> {
        let mut lines = text.lines();
        let magic = lines
            .next()
            .ok_or_else(|| Error::Format("empty layout file".into()))?
            .trim();
        let version = match magic.strip_prefix("talents-layout v") {
            Some(v) => v
                .parse::<u32>()
                .map_err(|_| Error::Format(format!("bad layout version in {magic:?}")))?,
            None => {
                return Err(Error::Format(format!(
                    "bad magic line {magic:?}, expected `talents-layout v{LAYOUT_FORMAT_VERSION}`"
                )))
            }
        };
        if version != LAYOUT_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported layout version {version} (supported: {LAYOUT_FORMAT_VERSION})"
            )));
        }

        let mut name = String::new();
        let mut schedule = OrderSchedule::default();
        let mut episode_ticks = 400u32;
        let mut rows: Vec<String> = Vec::new();
        let mut in_grid = false;
        let mut saw_end = false;

        for line in lines {
            if in_grid {
                if line.trim() == "end" {
                    saw_end = true;
                    in_grid = false;
                    continue;
                }
                rows.push(line.trim_end().to_string());
                continue;
            }
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "grid" {
                in_grid = true;
                continue;
            }
            let (key, value) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Format(format!("bad header line {line:?}")))?;
            let value = value.trim();
            let parse_u32 = |v: &str| {
                v.parse::<u32>()
                    .map_err(|_| Error::Format(format!("bad integer for {key}: {v:?}")))
            };
            let parse_i32 = |v: &str| {
                v.parse::<i32>()
                    .map_err(|_| Error::Format(format!("bad integer for {key}: {v:?}")))
            };
            match key {
                "name" => name = value.to_string(),
                "episode_ticks" => episode_ticks = parse_u32(value)?,
                "initial_orders" => schedule.initial_orders = parse_u32(value)?,
                "order_interval" => schedule.interval = parse_u32(value)?,
                "order_max_concurrent" => schedule.max_concurrent = parse_u32(value)?,
                "order_time" => schedule.time_limit = parse_u32(value)?,
                "order_bonus_window" => schedule.bonus_window = parse_u32(value)?,
                "order_base_reward" => schedule.base_reward = parse_i32(value)?,
                "order_bonus_reward" => schedule.bonus_reward = parse_i32(value)?,
                other => return Err(Error::Format(format!("unknown header key {other:?}"))),
            }
        }
        if !saw_end {
            return Err(Error::Format("layout grid not terminated by `end`".into()));
        }
        if name.is_empty() {
            return Err(Error::Format("layout missing `name`".into()));
        }

        Self::from_rows(name, version, rows, schedule, episode_ticks)
    }

    fn from_rows(
        name: String,
        version: u32,
        rows: Vec<String>,
        schedule: OrderSchedule,
        episode_ticks: u32,
    ) -> Result<Layout> {
        let height = rows.len();
        if height < 3 {
            return Err(Error::Format("grid must have at least 3 rows".into()));
        }
        let width = rows[0].chars().count();
        if width < 3 {
            return Err(Error::Format("grid must have at least 3 columns".into()));
        }

        let mut tiles = vec![Tile::Floor; width * height];
        let mut starts: Vec<(i32, i32)> = vec![(-1, -1); 2];
        let mut stations: Vec<(StationKind, (i32, i32))> = Vec::new();

        for (y, row) in rows.iter().enumerate() {
            if row.chars().count() != width {
                return Err(Error::Format(format!(
                    "grid row {y} has width {} but expected {width}",
                    row.chars().count()
                )));
            }
            for (x, ch) in row.chars().enumerate() {
                let pos = (x as i32, y as i32);
                let tile = match ch {
                    '.' => Tile::Floor,
                    'X' => Tile::Counter,
                    'O' => Tile::IngredientSource(IngredientKind::Onion),
                    'R' => Tile::IngredientSource(IngredientKind::Rice),
                    'M' => Tile::IngredientSource(IngredientKind::Protein),
                    'P' => Tile::PlateStack,
                    'D' => Tile::DeliveryWindow,
                    'T' => Tile::Trash,
                    'p' => {
                        stations.push((StationKind::Pot, pos));
                        Tile::StationSlot(StationKind::Pot)
                    }
                    'c' => {
                        stations.push((StationKind::RiceCooker, pos));
                        Tile::StationSlot(StationKind::RiceCooker)
                    }
                    'g' => {
                        stations.push((StationKind::Grill, pos));
                        Tile::StationSlot(StationKind::Grill)
                    }
                    '1' | '2' => {
                        let idx = (ch as u8 - b'1') as usize;
                        if starts[idx] != (-1, -1) {
                            return Err(Error::Format(format!("duplicate player start {ch}")));
                        }
                        starts[idx] = pos;
                        Tile::Floor
                    }
                    other => return Err(Error::Format(format!("unknown glyph {other:?}"))),
                };
                tiles[y * width + x] = tile;
            }
        }

        // Stations in canonical pot, cooker, grill order.
        stations.sort_by_key(|(kind, pos)| {
            let k = match kind {
                StationKind::Pot => 0,
                StationKind::RiceCooker => 1,
                StationKind::Grill => 2,
            };
            (k, pos.1, pos.0)
        });

        let layout = Layout {
            name,
            version,
            width,
            height,
            tiles,
            starts: [starts[0], starts[1]],
            stations,
            schedule,
            episode_ticks,
        };
        layout.validate()?;
        Ok(layout)
    }

    fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::Format(msg));
        if self.starts[0] == (-1, -1) || self.starts[1] == (-1, -1) {
            return err("layout must define both player starts".into());
        }
        if self.starts[0] == self.starts[1] {
            return err("player starts must differ".into());
        }
        // Boundary tiles are never floor.
        for y in 0..self.height as i32 {
            for x in 0..self.width as i32 {
                let boundary = x == 0
                    || y == 0
                    || x == self.width as i32 - 1
                    || y == self.height as i32 - 1;
                if boundary && self.tile(x, y).walkable() {
                    return err(format!("boundary tile ({x},{y}) must not be floor"));
                }
            }
        }
        // Exactly three stations, one per kind.
        if self.stations.len() != 3 {
            return err(format!("expected 3 stations, found {}", self.stations.len()));
        }
        for kind in StationKind::ALL {
            if self.stations.iter().filter(|(k, _)| *k == kind).count() != 1 {
                return err(format!("expected exactly one {kind:?} station"));
            }
        }
        // Featurization requires at least one of each interactive tile kind.
        for kind in IngredientKind::ALL {
            if self
                .positions_where(|t| t == Tile::IngredientSource(kind))
                .is_empty()
            {
                return err(format!("layout needs at least one {kind:?} source"));
            }
        }
        for (tile, what) in [
            (Tile::PlateStack, "plate stack"),
            (Tile::DeliveryWindow, "delivery window"),
            (Tile::Trash, "trash"),
        ] {
            if self.positions_where(|t| t == tile).is_empty() {
                return err(format!("layout needs at least one {what}"));
            }
        }
        if self.schedule.bonus_window > self.schedule.time_limit {
            return err("bonus window exceeds order time limit".into());
        }
        Ok(())
    }

    /// Serialize back to the text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("talents-layout v{}\n", self.version);
        out.push_str(&format!("name {}\n", self.name));
        out.push_str(&format!("episode_ticks {}\n", self.episode_ticks));
        let s = &self.schedule;
        out.push_str(&format!("initial_orders {}\n", s.initial_orders));
        out.push_str(&format!("order_interval {}\n", s.interval));
        out.push_str(&format!("order_max_concurrent {}\n", s.max_concurrent));
        out.push_str(&format!("order_time {}\n", s.time_limit));
        out.push_str(&format!("order_bonus_window {}\n", s.bonus_window));
        out.push_str(&format!("order_base_reward {}\n", s.base_reward));
        out.push_str(&format!("order_bonus_reward {}\n", s.bonus_reward));
        out.push_str("grid\n");
        for y in 0..self.height as i32 {
            for x in 0..self.width as i32 {
                let pos = (x, y);
                let ch = if pos == self.starts[0] {
                    '1'
                } else if pos == self.starts[1] {
                    '2'
                } else {
                    match self.tile(x, y) {
                        Tile::Floor => '.',
                        Tile::Counter => 'X',
                        Tile::IngredientSource(IngredientKind::Onion) => 'O',
                        Tile::IngredientSource(IngredientKind::Rice) => 'R',
                        Tile::IngredientSource(IngredientKind::Protein) => 'M',
                        Tile::PlateStack => 'P',
                        Tile::DeliveryWindow => 'D',
                        Tile::Trash => 'T',
                        Tile::StationSlot(StationKind::Pot) => 'p',
                        Tile::StationSlot(StationKind::RiceCooker) => 'c',
                        Tile::StationSlot(StationKind::Grill) => 'g',
                    }
                };
                out.push(ch);
            }
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }
}

pub const BUILTIN_LAYOUTS: [&str; 4] = ["open", "hallway", "forced_coord", "ring"];

/// Look up one of the built-in layouts by name.
pub fn builtin(name: &str) -> Result<Layout> {
    let text = match name {
        "open" => include_str!("../../layouts/open.layout"),
        "hallway" => include_str!("../../layouts/hallway.layout"),
        "forced_coord" => include_str!("../../layouts/forced_coord.layout"),
        "ring" => include_str!("../../layouts/ring.layout"),
        other => {
            return Err(Error::Config(format!(
                "unknown layout {other:?} (built-ins: {})",
                BUILTIN_LAYOUTS.join(", ")
            )))
        }
    };
    Layout::parse(text)
}

/// Load a layout by built-in name or, failing that, as a file path.
pub fn load(name_or_path: &str) -> Result<Layout> {
    if BUILTIN_LAYOUTS.contains(&name_or_path) {
        return builtin(name_or_path);
    }
    let path = std::path::Path::new(name_or_path);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        return Layout::parse(&text);
    }
    Err(Error::Config(format!(
        "unknown layout {name_or_path:?}: not a built-in and not a file"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse_and_validate() {
        for name in BUILTIN_LAYOUTS {
            let l = builtin(name).unwrap();
            assert_eq!(l.name, name);
            assert_eq!(l.stations.len(), 3);
        }
    }

    #[test]
    fn round_trips_through_text() {
        for name in BUILTIN_LAYOUTS {
            let l = builtin(name).unwrap();
            let reparsed = Layout::parse(&l.to_text()).unwrap();
            assert_eq!(l, reparsed);
        }
    }

    #[test]
    fn unknown_layout_is_config_error() {
        assert!(matches!(builtin("atrium"), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_bad_version() {
        let text = "talents-layout v9\nname x\ngrid\nXXX\nX1X\nXXX\nend\n";
        assert!(matches!(Layout::parse(text), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_floor_on_boundary() {
        let text = "talents-layout v1\nname bad\ngrid\nXX.\nX12\nXXX\nend\n";
        assert!(matches!(Layout::parse(text), Err(Error::Format(_))));
    }
}
