//! Problem representation: instances, demand expansion and solutions.
//!
//! Instance files are line oriented:
//!
//! ```text
//! # optional comments
//! W H
//! n
//! w_1 h_1 d_1
//! ...
//! w_n h_n d_n
//! ```
//!
//! Solution files start with `k N` followed by one line per copy:
//! `type copy sheet x y rotated`, where `type`, `copy` and `sheet` are
//! 1-based and `rotated` is `0` or `1`.

use std::fmt::{self, Write as _};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Validation { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

fn parse_err(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Parse { line, msg: msg.into() }
}

fn invalid_at(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Validation { line, msg: msg.into() }
}

/// One item type: a `width x height` rectangle demanded `demand` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ItemType {
    pub width: u32,
    pub height: u32,
    pub demand: u32,
}

impl ItemType {
    pub fn new(width: u32, height: u32, demand: u32) -> Self {
        ItemType { width, height, demand }
    }

    pub fn area(&self) -> u64 {
        u64::from(self.width) * u64::from(self.height)
    }

    pub fn is_square(&self) -> bool {
        self.width == self.height
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub sheet_width: u32,
    pub sheet_height: u32,
    pub types: Vec<ItemType>,
}

impl Instance {
    /// Builds and validates an instance. Every type must fit the sheet in at
    /// least one orientation.
    pub fn new(
        name: impl Into<String>,
        sheet_width: u32,
        sheet_height: u32,
        types: Vec<ItemType>,
    ) -> Result<Self, ModelError> {
        let inst = Instance { name: name.into(), sheet_width, sheet_height, types };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<(), ModelError> {
        if self.sheet_width == 0 || self.sheet_height == 0 {
            return Err(ModelError::Invalid("sheet dimensions must be positive".into()));
        }
        if self.types.is_empty() {
            return Err(ModelError::Invalid("instance has no item types".into()));
        }
        for (t, ty) in self.types.iter().enumerate() {
            if let Err(msg) = self.check_type(ty) {
                return Err(ModelError::Invalid(format!("item type {}: {msg}", t + 1)));
            }
        }
        Ok(())
    }

    fn check_type(&self, ty: &ItemType) -> Result<(), String> {
        if ty.width == 0 || ty.height == 0 {
            return Err("dimensions must be positive".into());
        }
        if ty.demand == 0 {
            return Err("demand must be positive".into());
        }
        if !self.fits_unrotated(ty) && !self.fits_rotated(ty) {
            return Err(format!(
                "{}x{} fits a {}x{} sheet in no orientation",
                ty.width, ty.height, self.sheet_width, self.sheet_height
            ));
        }
        Ok(())
    }

    pub fn fits_unrotated(&self, ty: &ItemType) -> bool {
        ty.width <= self.sheet_width && ty.height <= self.sheet_height
    }

    pub fn fits_rotated(&self, ty: &ItemType) -> bool {
        ty.height <= self.sheet_width && ty.width <= self.sheet_height
    }

    /// Checks the per-mode fit requirement. Without rotation every type must
    /// fit as given; items that would only fit rotated make the instance
    /// infeasible rather than being turned silently.
    pub fn check_mode(&self, rotation: bool) -> Result<(), ModelError> {
        if rotation {
            return Ok(());
        }
        for (t, ty) in self.types.iter().enumerate() {
            if !self.fits_unrotated(ty) {
                return Err(ModelError::Invalid(format!(
                    "item type {} ({}x{}) only fits rotated but rotation is disabled",
                    t + 1,
                    ty.width,
                    ty.height
                )));
            }
        }
        Ok(())
    }

    pub fn copy_count(&self) -> usize {
        self.types.iter().map(|t| t.demand as usize).sum()
    }

    pub fn sheet_area(&self) -> u64 {
        u64::from(self.sheet_width) * u64::from(self.sheet_height)
    }

    pub fn total_item_area(&self) -> u64 {
        self.types.iter().map(|t| t.area() * u64::from(t.demand)).sum()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.sheet_width, self.sheet_height)?;
        writeln!(f, "{}", self.types.len())?;
        for t in &self.types {
            writeln!(f, "{} {} {}", t.width, t.height, t.demand)?;
        }
        Ok(())
    }
}

/// Parses the canonical instance format. Blank lines and lines starting
/// with `#` are ignored; reported line numbers are 1-based physical lines.
pub fn parse_instance(text: &str) -> Result<Instance, ModelError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "missing sheet size line"))?;
    let dims = parse_ints(line_no, header, 2)?;
    let (sheet_width, sheet_height) = (dims[0], dims[1]);
    if sheet_width == 0 || sheet_height == 0 {
        return Err(invalid_at(line_no, "sheet dimensions must be positive"));
    }

    let (line_no, count_line) =
        lines.next().ok_or_else(|| parse_err(line_no + 1, "missing item type count"))?;
    let n = parse_ints(line_no, count_line, 1)?[0] as usize;
    if n == 0 {
        return Err(invalid_at(line_no, "instance has no item types"));
    }

    let mut inst = Instance { name: String::new(), sheet_width, sheet_height, types: Vec::with_capacity(n) };
    let mut last = line_no;
    for _ in 0..n {
        let (line_no, l) = lines
            .next()
            .ok_or_else(|| parse_err(last + 1, format!("expected {n} item type lines")))?;
        last = line_no;
        let v = parse_ints(line_no, l, 3)?;
        let ty = ItemType::new(v[0], v[1], v[2]);
        inst.check_type(&ty).map_err(|msg| invalid_at(line_no, msg))?;
        inst.types.push(ty);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(parse_err(line_no, "unexpected trailing content"));
    }
    Ok(inst)
}

fn parse_ints(line: usize, text: &str, expected: usize) -> Result<Vec<u32>, ModelError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != expected {
        return Err(parse_err(line, format!("expected {expected} integers, found {}", fields.len())));
    }
    fields
        .iter()
        .map(|f| {
            if f.starts_with('-') {
                return Err(invalid_at(line, format!("value must be non-negative: {f}")));
            }
            f.parse::<u32>().map_err(|_| parse_err(line, format!("not an integer: {f}")))
        })
        .collect()
}

/// A single demanded unit of an item type. `ordinal` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Copy {
    pub type_index: usize,
    pub ordinal: u32,
    pub width: u32,
    pub height: u32,
}

impl Copy {
    pub fn label(&self) -> String {
        format!("c{},{}", self.type_index + 1, self.ordinal)
    }

    pub fn dims(&self, rotated: bool) -> (u32, u32) {
        if rotated {
            (self.height, self.width)
        } else {
            (self.width, self.height)
        }
    }
}

/// Expands demands into individual copies, type-major with ascending ordinal.
pub fn expand_demands(instance: &Instance) -> Vec<Copy> {
    instance
        .types
        .iter()
        .enumerate()
        .flat_map(|(t, ty)| {
            (1..=ty.demand).map(move |ordinal| Copy {
                type_index: t,
                ordinal,
                width: ty.width,
                height: ty.height,
            })
        })
        .collect()
}

/// Position of one copy. `sheet` is 1-based; `(x, y)` is the bottom-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub copy: Copy,
    pub sheet: u32,
    pub x: u32,
    pub y: u32,
    pub rotated: bool,
}

impl Placement {
    pub fn effective_width(&self) -> u32 {
        self.copy.dims(self.rotated).0
    }

    pub fn effective_height(&self) -> u32 {
        self.copy.dims(self.rotated).1
    }

    pub fn right(&self) -> u64 {
        u64::from(self.x) + u64::from(self.effective_width())
    }

    pub fn top(&self) -> u64 {
        u64::from(self.y) + u64::from(self.effective_height())
    }

    pub fn within(&self, instance: &Instance) -> bool {
        self.right() <= u64::from(instance.sheet_width) && self.top() <= u64::from(instance.sheet_height)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub placements: Vec<Placement>,
    pub sheets_used: u32,
}

impl Solution {
    /// Builds a solution, deriving `sheets_used` from the highest sheet index.
    pub fn new(placements: Vec<Placement>) -> Self {
        let sheets_used = placements.iter().map(|p| p.sheet).max().unwrap_or(0);
        Solution { placements, sheets_used }
    }

    pub fn on_sheet(&self, sheet: u32) -> impl Iterator<Item = &Placement> {
        self.placements.iter().filter(move |p| p.sheet == sheet)
    }

    /// Renumbers sheets so the used ones are exactly `1..=count`, keeping
    /// their relative order.
    pub fn compact_sheets(&mut self) {
        let mut used: Vec<u32> = self.placements.iter().map(|p| p.sheet).collect();
        used.sort_unstable();
        used.dedup();
        for p in &mut self.placements {
            p.sheet = used.binary_search(&p.sheet).unwrap() as u32 + 1;
        }
        self.sheets_used = used.len() as u32;
    }
}

pub fn write_solution(solution: &Solution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", solution.sheets_used, solution.placements.len());
    for p in &solution.placements {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            p.copy.type_index + 1,
            p.copy.ordinal,
            p.sheet,
            p.x,
            p.y,
            u8::from(p.rotated)
        );
    }
    out
}

/// Parses a solution file against `instance`. Rejects unknown copies,
/// duplicates and a placement count that disagrees with the header. The
/// header's sheet count is kept as given; geometry, demand and sheet-index
/// consistency are left to the verifier.
pub fn read_solution(text: &str, instance: &Instance) -> Result<Solution, ModelError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "missing header line"))?;
    let hv = parse_ints(line_no, header, 2)?;
    let (k, n) = (hv[0], hv[1] as usize);

    let mut placements = Vec::with_capacity(n);
    let mut seen = std::collections::HashSet::new();
    for (line_no, l) in lines {
        let v = parse_ints(line_no, l, 6)?;
        let (t, ordinal, sheet, x, y, rot) = (v[0] as usize, v[1], v[2], v[3], v[4], v[5]);
        if t == 0 || t > instance.types.len() {
            return Err(invalid_at(line_no, format!("unknown item type {t}")));
        }
        let ty = instance.types[t - 1];
        if ordinal == 0 || ordinal > ty.demand {
            return Err(invalid_at(line_no, format!("type {t} has no copy {ordinal}")));
        }
        if !seen.insert((t, ordinal)) {
            return Err(invalid_at(line_no, format!("copy c{t},{ordinal} placed twice")));
        }
        if sheet == 0 {
            return Err(invalid_at(line_no, "sheet indices start at 1"));
        }
        if rot > 1 {
            return Err(parse_err(line_no, "rotated flag must be 0 or 1"));
        }
        let p = Placement {
            copy: Copy { type_index: t - 1, ordinal, width: ty.width, height: ty.height },
            sheet,
            x,
            y,
            rotated: rot == 1,
        };
        placements.push(p);
    }
    if placements.len() != n {
        return Err(ModelError::Invalid(format!(
            "header declares {n} placements, found {}",
            placements.len()
        )));
    }
    Ok(Solution { placements, sheets_used: k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_two_sheet() {
        let inst = parse_instance("6 4\n2\n3 2 3\n2 2 3\n").unwrap();
        assert_eq!((inst.sheet_width, inst.sheet_height), (6, 4));
        assert_eq!(inst.types, vec![ItemType::new(3, 2, 3), ItemType::new(2, 2, 3)]);
    }

    #[test]
    fn parses_minimal_with_comments() {
        let inst = parse_instance("# tiny\n10 10\n\n1\n# one type\n1 1 1\n").unwrap();
        assert_eq!(inst.types, vec![ItemType::new(1, 1, 1)]);
        assert_eq!(inst.copy_count(), 1);
    }

    #[test]
    fn rejects_item_fitting_nowhere() {
        let err = parse_instance("6 4\n1\n7 5 1\n").unwrap_err();
        assert_eq!(err, ModelError::Validation { line: 3, msg: "7x5 fits a 6x4 sheet in no orientation".into() });
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_instance("6 4\n1\n3 2 0\n"), Err(ModelError::Validation { line: 3, .. })));
        assert!(matches!(parse_instance("6 0\n1\n3 2 1\n"), Err(ModelError::Validation { line: 1, .. })));
        assert!(matches!(parse_instance("6 4\n1\n3 x 1\n"), Err(ModelError::Parse { line: 3, .. })));
        assert!(matches!(parse_instance("6 4\n2\n3 2 1\n"), Err(ModelError::Parse { line: 4, .. })));
        assert!(matches!(parse_instance("6 4\n1\n3 2 1 4\n"), Err(ModelError::Parse { line: 3, .. })));
        assert!(matches!(parse_instance("6 4\n1\n3 -2 1\n"), Err(ModelError::Validation { line: 3, .. })));
        assert!(matches!(parse_instance("6 4\n1\n3 2 1\n1 1 1\n"), Err(ModelError::Parse { line: 4, .. })));
        assert!(parse_instance("").is_err());
    }

    #[test]
    fn rotation_only_fit_rejected_without_rotation() {
        let inst = parse_instance("6 4\n1\n2 5 1\n").unwrap();
        assert!(inst.check_mode(true).is_ok());
        assert!(inst.check_mode(false).is_err());
    }

    #[test]
    fn expansion_is_type_major() {
        let inst = Instance::new("t", 10, 10, vec![ItemType::new(2, 3, 2), ItemType::new(1, 1, 3)]).unwrap();
        let labels: Vec<_> = expand_demands(&inst).iter().map(Copy::label).collect();
        assert_eq!(labels, ["c1,1", "c1,2", "c2,1", "c2,2", "c2,3"]);

        let two_sheet = expand_demands(&fixtures::two_sheet());
        assert_eq!(two_sheet.len(), 6);
        assert!(two_sheet[..3].iter().all(|c| (c.width, c.height) == (3, 2)));
        assert!(two_sheet[3..].iter().all(|c| (c.width, c.height) == (2, 2)));
    }

    #[test]
    fn solution_round_trip() {
        let inst = fixtures::two_sheet();
        let sol = fixtures::two_sheet_solution();
        let text = write_solution(&sol);
        assert!(text.starts_with("2 6\n"));
        assert_eq!(read_solution(&text, &inst).unwrap(), sol);
    }

    #[test]
    fn minimal_solution_round_trip() {
        let inst = Instance::new("one", 1, 1, vec![ItemType::new(1, 1, 1)]).unwrap();
        let sol = read_solution("1 1\n1 1 1 0 0 0\n", &inst).unwrap();
        assert_eq!(sol.placements.len(), 1);
        assert_eq!(write_solution(&sol), "1 1\n1 1 1 0 0 0\n");
    }

    #[test]
    fn read_leaves_geometry_to_the_verifier() {
        let inst = fixtures::two_sheet();
        // c1,2 at x=4 ends at 7 > 6
        let text = "2 6\n1 1 1 0 0 0\n1 2 1 4 0 0\n1 3 2 0 0 0\n2 1 1 0 2 0\n2 2 1 2 2 0\n2 3 1 4 2 0\n";
        let sol = read_solution(text, &inst).unwrap();
        assert!(crate::verify::verify_solution(&inst, &sol, false).has(crate::verify::ViolationKind::Boundary));
        let sol = read_solution("3 1\n1 1 1 0 0 0\n", &inst).unwrap();
        assert_eq!(sol.sheets_used, 3);
        assert!(crate::verify::verify_solution(&inst, &sol, false).has(crate::verify::ViolationKind::SheetIndex));
    }

    #[test]
    fn read_rejects_structural_errors() {
        let inst = fixtures::two_sheet();
        assert!(read_solution("1 1\n3 1 1 0 0 0\n", &inst).is_err());
        assert!(read_solution("1 1\n1 4 1 0 0 0\n", &inst).is_err());
        assert!(read_solution("1 2\n1 1 1 0 0 0\n1 1 1 3 0 0\n", &inst).is_err());
        assert!(read_solution("1 2\n1 1 1 0 0 0\n", &inst).is_err());
        assert!(read_solution("1 1\n1 1 0 0 0 0\n", &inst).is_err());
        assert!(read_solution("1 1\n1 1 1 0 0 2\n", &inst).is_err());
    }

    #[test]
    fn compacting_renumbers_sheets() {
        let inst = fixtures::two_sheet();
        let copies = expand_demands(&inst);
        let mut sol = Solution::new(vec![
            Placement { copy: copies[0], sheet: 3, x: 0, y: 0, rotated: false },
            Placement { copy: copies[1], sheet: 5, x: 0, y: 0, rotated: false },
        ]);
        assert_eq!(sol.sheets_used, 5);
        sol.compact_sheets();
        assert_eq!(sol.sheets_used, 2);
        assert_eq!(sol.placements[0].sheet, 1);
        assert_eq!(sol.placements[1].sheet, 2);
    }
}
