//! Geometric solution checker and an exhaustive optimum oracle for tiny
//! instances. Nothing here shares logic with the SAT encoding.

use std::fmt;

use thiserror::Error;

use crate::model::{expand_demands, Copy, Instance, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Boundary,
    Overlap,
    Demand,
    SheetIndex,
    RotationForbidden,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::Boundary => "BOUNDARY",
            ViolationKind::Overlap => "OVERLAP",
            ViolationKind::Demand => "DEMAND",
            ViolationKind::SheetIndex => "SHEET_INDEX",
            ViolationKind::RotationForbidden => "ROTATION_FORBIDDEN",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Checks boundaries, pairwise non-overlap on shared sheets (half-open
/// rectangles, so touching edges are fine), exact demand coverage, sheet
/// indices and the rotation permission.
pub fn verify_solution(instance: &Instance, solution: &Solution, rotation_allowed: bool) -> VerifyReport {
    let mut violations = Vec::new();
    let mut push = |kind, detail: String| violations.push(Violation { kind, detail });
    let (sw, sh) = (u64::from(instance.sheet_width), u64::from(instance.sheet_height));

    let mut counts = vec![0u64; instance.types.len()];
    let mut max_sheet = 0;
    for p in &solution.placements {
        let label = p.copy.label();
        match instance.types.get(p.copy.type_index) {
            Some(ty) => {
                counts[p.copy.type_index] += 1;
                if (ty.width, ty.height) != (p.copy.width, p.copy.height) {
                    push(ViolationKind::Demand, format!("{label} has dimensions that differ from its type"));
                }
                if p.copy.ordinal == 0 || p.copy.ordinal > ty.demand {
                    push(ViolationKind::Demand, format!("{label} exceeds the demand of its type"));
                }
            }
            None => push(ViolationKind::Demand, format!("{label} refers to an unknown item type")),
        }
        if p.sheet == 0 {
            push(ViolationKind::SheetIndex, format!("{label} is on sheet 0"));
        }
        max_sheet = max_sheet.max(p.sheet);
        if p.rotated && !rotation_allowed {
            push(ViolationKind::RotationForbidden, format!("{label} is rotated"));
        }
        let (x1, y1) = (u64::from(p.x) + u64::from(p.effective_width()), u64::from(p.y) + u64::from(p.effective_height()));
        if x1 > sw || y1 > sh {
            push(
                ViolationKind::Boundary,
                format!("{label} spans [{},{})x[{},{}) outside the {sw}x{sh} sheet", p.x, x1, p.y, y1),
            );
        }
    }
    if max_sheet != solution.sheets_used {
        push(
            ViolationKind::SheetIndex,
            format!("solution claims {} sheets but uses index {max_sheet}", solution.sheets_used),
        );
    }
    for (t, ty) in instance.types.iter().enumerate() {
        if counts[t] != u64::from(ty.demand) {
            push(
                ViolationKind::Demand,
                format!("type {} placed {} times, demand is {}", t + 1, counts[t], ty.demand),
            );
        }
    }
    let mut seen = std::collections::HashSet::new();
    for p in &solution.placements {
        if !seen.insert((p.copy.type_index, p.copy.ordinal)) {
            push(ViolationKind::Demand, format!("{} placed more than once", p.copy.label()));
        }
    }

    for (i, a) in solution.placements.iter().enumerate() {
        for b in &solution.placements[i + 1..] {
            if a.sheet != b.sheet {
                continue;
            }
            let separated = a.right() <= u64::from(b.x)
                || b.right() <= u64::from(a.x)
                || a.top() <= u64::from(b.y)
                || b.top() <= u64::from(a.y);
            if !separated {
                push(
                    ViolationKind::Overlap,
                    format!(
                        "{} [{},{})x[{},{}) intersects {} [{},{})x[{},{}) on sheet {}",
                        a.copy.label(),
                        a.x,
                        a.right(),
                        a.y,
                        a.top(),
                        b.copy.label(),
                        b.x,
                        b.right(),
                        b.y,
                        b.top(),
                        a.sheet
                    ),
                );
            }
        }
    }

    VerifyReport { ok: violations.is_empty(), violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_copies: usize,
    pub max_cells: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_copies: 7, max_cells: 64 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle refuses {copies} copies (limit {limit})")]
    TooManyCopies { copies: usize, limit: usize },
    #[error("oracle refuses a sheet of {cells} cells (limit {limit})")]
    SheetTooLarge { cells: u64, limit: u64 },
    #[error("an item type fits in no permitted orientation")]
    Infeasible,
}

/// One way to put a copy down: the occupied cells as a bitmask.
struct Spot {
    mask: u64,
}

struct Oracle {
    /// Per copy, every placement (orientation and corner) on an empty sheet.
    spots: Vec<Vec<Spot>>,
    same_type_as_prev: Vec<bool>,
    areas: Vec<u32>,
    cells: u32,
}

impl Oracle {
    fn new(instance: &Instance, rotation: bool, copies: &[Copy]) -> Result<Self, OracleError> {
        let (sw, sh) = (instance.sheet_width, instance.sheet_height);
        let mut spots = Vec::with_capacity(copies.len());
        for c in copies {
            let mut orientations = vec![(c.width, c.height)];
            if rotation && c.width != c.height {
                orientations.push((c.height, c.width));
            }
            let mut list = Vec::new();
            for (w, h) in orientations {
                if w > sw || h > sh {
                    continue;
                }
                for y in 0..=sh - h {
                    for x in 0..=sw - w {
                        let mut mask = 0u64;
                        for dy in 0..h {
                            for dx in 0..w {
                                mask |= 1 << ((y + dy) * sw + x + dx);
                            }
                        }
                        list.push(Spot { mask });
                    }
                }
            }
            if list.is_empty() {
                return Err(OracleError::Infeasible);
            }
            spots.push(list);
        }
        let same_type_as_prev = (0..copies.len())
            .map(|i| i > 0 && copies[i - 1].type_index == copies[i].type_index)
            .collect();
        Ok(Oracle {
            spots,
            same_type_as_prev,
            areas: copies.iter().map(|c| c.width * c.height).collect(),
            cells: sw * sh,
        })
    }

    /// Depth-first search over (sheet, spot) choices. Sheets are opened in
    /// order, and consecutive copies of one type use non-decreasing
    /// (sheet, spot) keys, strictly increasing on a shared sheet.
    fn feasible(&self, sheets: usize) -> bool {
        let mut occupied = vec![0u64; sheets];
        let mut chosen = vec![(0usize, 0usize); self.spots.len()];
        let remaining: u32 = self.areas.iter().sum();
        self.search(0, 0, &mut occupied, &mut chosen, remaining)
    }

    fn search(
        &self,
        i: usize,
        opened: usize,
        occupied: &mut [u64],
        chosen: &mut [(usize, usize)],
        remaining_area: u32,
    ) -> bool {
        if i == self.spots.len() {
            return true;
        }
        let free: u32 = occupied.iter().map(|m| self.cells - m.count_ones()).sum();
        if remaining_area > free {
            return false;
        }
        let (min_sheet, min_spot) = if self.same_type_as_prev[i] { chosen[i - 1] } else { (0, 0) };
        let last_sheet = (opened + 1).min(occupied.len());
        for sheet in min_sheet..last_sheet {
            let first = if self.same_type_as_prev[i] && sheet == min_sheet { min_spot + 1 } else { 0 };
            for (s, spot) in self.spots[i].iter().enumerate().skip(first) {
                if occupied[sheet] & spot.mask != 0 {
                    continue;
                }
                occupied[sheet] |= spot.mask;
                chosen[i] = (sheet, s);
                let found = self.search(
                    i + 1,
                    opened.max(sheet + 1),
                    occupied,
                    chosen,
                    remaining_area - self.areas[i],
                );
                occupied[sheet] &= !spot.mask;
                if found {
                    return true;
                }
            }
        }
        false
    }
}

/// Minimum number of sheets by exhaustive search. Only for tiny instances.
pub fn brute_force_optimal(instance: &Instance, rotation: bool, limits: OracleLimits) -> Result<u32, OracleError> {
    let copies = expand_demands(instance);
    if copies.len() > limits.max_copies {
        return Err(OracleError::TooManyCopies { copies: copies.len(), limit: limits.max_copies });
    }
    let cells = instance.sheet_area();
    if cells > limits.max_cells.min(64) {
        return Err(OracleError::SheetTooLarge { cells, limit: limits.max_cells.min(64) });
    }
    let oracle = Oracle::new(instance, rotation, &copies)?;
    let area: u64 = copies.iter().map(|c| u64::from(c.width * c.height)).sum();
    let start = area.div_ceil(cells).max(1) as usize;
    for k in start..=copies.len() {
        if oracle.feasible(k) {
            return Ok(k as u32);
        }
    }
    unreachable!("one copy per sheet is always feasible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{ItemType, Placement};

    fn inst(w: u32, h: u32, types: &[(u32, u32, u32)]) -> Instance {
        Instance::new("t", w, h, types.iter().map(|&(a, b, d)| ItemType::new(a, b, d)).collect()).unwrap()
    }

    #[test]
    fn two_sheet_layout_verifies() {
        let r = verify_solution(&fixtures::two_sheet(), &fixtures::two_sheet_solution(), false);
        assert!(r.ok, "{:?}", r.violations);
    }

    #[test]
    fn detects_overlap() {
        let mut sol = fixtures::two_sheet_solution();
        sol.placements[1].x = 2;
        let r = verify_solution(&fixtures::two_sheet(), &sol, false);
        assert!(!r.ok);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::Overlap);
        assert!(r.violations[0].detail.contains("c1,1 [0,3)x[0,2)"));
        assert!(r.violations[0].detail.contains("c1,2 [2,5)x[0,2)"));
    }

    #[test]
    fn detects_missing_demand() {
        let mut sol = fixtures::two_sheet_solution();
        sol.placements.remove(4);
        let r = verify_solution(&fixtures::two_sheet(), &sol, false);
        assert!(r.has(ViolationKind::Demand));
    }

    #[test]
    fn detects_boundary_rotation_and_sheet_errors() {
        let mut sol = fixtures::two_sheet_solution();
        sol.placements[2].x = 5;
        sol.placements[2].rotated = true;
        let r = verify_solution(&fixtures::two_sheet(), &sol, false);
        assert!(r.has(ViolationKind::Boundary));
        assert!(r.has(ViolationKind::RotationForbidden));

        let mut sol = fixtures::two_sheet_solution();
        sol.sheets_used = 3;
        assert!(verify_solution(&fixtures::two_sheet(), &sol, false).has(ViolationKind::SheetIndex));
    }

    #[test]
    fn touching_edges_are_allowed() {
        let i = inst(2, 1, &[(1, 1, 2)]);
        let c = expand_demands(&i);
        let sol = Solution::new(vec![
            Placement { copy: c[0], sheet: 1, x: 0, y: 0, rotated: false },
            Placement { copy: c[1], sheet: 1, x: 1, y: 0, rotated: false },
        ]);
        assert!(verify_solution(&i, &sol, false).ok);
    }

    #[test]
    fn oracle_examples() {
        let l = OracleLimits::default();
        assert_eq!(brute_force_optimal(&fixtures::two_sheet(), false, l), Ok(2));
        assert_eq!(brute_force_optimal(&fixtures::two_sheet(), true, l), Ok(2));
        assert_eq!(brute_force_optimal(&inst(1, 1, &[(1, 1, 1)]), false, l), Ok(1));
        assert_eq!(brute_force_optimal(&inst(2, 2, &[(2, 2, 3)]), false, l), Ok(3));
        assert_eq!(brute_force_optimal(&inst(2, 1, &[(2, 1, 2)]), false, l), Ok(2));
        // a tall item plus three unit squares fill one 3x3 sheet exactly
        assert_eq!(brute_force_optimal(&inst(3, 3, &[(2, 3, 1), (1, 1, 3)]), false, l), Ok(1));
    }

    #[test]
    fn oracle_needs_rotation_when_geometry_demands_it() {
        // two 1x3 bars only share a 3x2 sheet lying down
        let i = inst(3, 2, &[(1, 3, 1), (3, 1, 1)]);
        assert!(i.check_mode(false).is_err());
        assert_eq!(brute_force_optimal(&i, true, OracleLimits::default()), Ok(1));
        let j = inst(3, 2, &[(1, 2, 3), (3, 1, 1)]);
        assert_eq!(brute_force_optimal(&j, false, OracleLimits::default()), Ok(2));
        assert_eq!(brute_force_optimal(&j, true, OracleLimits::default()), Ok(2));
    }

    #[test]
    fn oracle_refuses_large_inputs() {
        let l = OracleLimits::default();
        assert!(matches!(brute_force_optimal(&inst(10, 10, &[(1, 1, 1)]), false, l), Err(OracleError::SheetTooLarge { .. })));
        assert!(matches!(brute_force_optimal(&inst(4, 4, &[(1, 1, 8)]), false, l), Err(OracleError::TooManyCopies { .. })));
    }
}
