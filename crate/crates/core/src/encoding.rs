//! Propositional encoding of "the copies fit on `k` sheets".
//!
//! Coordinates use the order encoding: `px(c, e)` is true iff `x_c <= e`.
//! Thresholds are materialised for `e` in `0..=W-2` only; `e >= W-1` is the
//! constant true and `e < 0` the constant false, and clauses are folded
//! against those constants as they are emitted. Non-overlap between two
//! copies is enforced only when both sit on the same sheet.

use thiserror::Error;

use crate::model::{Copy, Instance, Placement, Solution};
use crate::satcore::{CnfFormula, Model};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("sheet count must be at least 1")]
    NoSheets,
    #[error("nothing to encode: the instance has no copies")]
    NoCopies,
    #[error("copy {0} does not fit unrotated and rotation is disabled")]
    NeedsRotation(String),
    #[error("copy {0} fits in no orientation")]
    NoOrientation(String),
    #[error("model assigns copy {copy} to {count} sheets")]
    SheetAssignment { copy: String, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EncodeConfig {
    pub sheets: u32,
    pub rotation: bool,
    pub symmetry_breaking: bool,
}

impl EncodeConfig {
    pub fn new(sheets: u32, rotation: bool, symmetry_breaking: bool) -> Self {
        EncodeConfig { sheets, rotation, symmetry_breaking }
    }
}

/// A literal or a folded constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Const(bool),
    Lit(i32),
}

impl std::ops::Not for Term {
    type Output = Term;
    fn not(self) -> Term {
        match self {
            Term::Const(b) => Term::Const(!b),
            Term::Lit(l) => Term::Lit(-l),
        }
    }
}

/// Variable numbering, kind-major: `s`, `px`, `py`, `l`, `u`, `R`, `a`;
/// within a kind copy-major, then by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    copies: usize,
    sheets: u32,
    width: u32,
    height: u32,
    rotation: bool,
    s_base: u32,
    px_base: u32,
    py_base: u32,
    l_base: u32,
    u_base: u32,
    r_base: u32,
    a_base: u32,
    total: u32,
}

impl VarMap {
    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn sheets(&self) -> u32 {
        self.sheets
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn rotation(&self) -> bool {
        self.rotation
    }

    /// Copy `c` is on sheet `j` (1-based).
    pub fn s(&self, c: usize, j: u32) -> i32 {
        debug_assert!(c < self.copies && (1..=self.sheets).contains(&j));
        (self.s_base + c as u32 * self.sheets + (j - 1)) as i32
    }

    /// `x_c <= e`.
    pub fn px(&self, c: usize, e: i64) -> Term {
        threshold(self.px_base, self.width, c, e)
    }

    /// `y_c <= f`.
    pub fn py(&self, c: usize, f: i64) -> Term {
        threshold(self.py_base, self.height, c, f)
    }

    fn pair(&self, c: usize, d: usize) -> u32 {
        debug_assert!(c != d && c < self.copies && d < self.copies);
        let col = if d < c { d } else { d - 1 };
        (c * (self.copies - 1) + col) as u32
    }

    /// Copy `c` lies entirely left of copy `d`.
    pub fn left(&self, c: usize, d: usize) -> i32 {
        (self.l_base + self.pair(c, d)) as i32
    }

    /// Copy `c` lies entirely below copy `d`.
    pub fn below(&self, c: usize, d: usize) -> i32 {
        (self.u_base + self.pair(c, d)) as i32
    }

    /// Rotation variable; `None` when rotation is disabled.
    pub fn rotated(&self, c: usize) -> Option<i32> {
        self.rotation.then(|| (self.r_base + c as u32) as i32)
    }

    /// Sheet `j` (1-based) is in use.
    pub fn used(&self, j: u32) -> i32 {
        debug_assert!((1..=self.sheets).contains(&j));
        (self.a_base + j - 1) as i32
    }
}

fn threshold(base: u32, extent: u32, c: usize, e: i64) -> Term {
    let per_copy = i64::from(extent) - 1;
    if e < 0 {
        Term::Const(false)
    } else if e >= per_copy {
        Term::Const(true)
    } else {
        Term::Lit((i64::from(base) + c as i64 * per_copy + e) as i32)
    }
}

/// Allocates variables for `copies` on `config.sheets` sheets of size
/// `width x height`.
pub fn allocate_vars(copies: &[Copy], width: u32, height: u32, config: &EncodeConfig) -> VarMap {
    let n = copies.len() as u32;
    let k = config.sheets;
    let s_base = 1;
    let px_base = s_base + n * k;
    let py_base = px_base + n * (width - 1);
    let l_base = py_base + n * (height - 1);
    let u_base = l_base + n * n.saturating_sub(1);
    let r_base = u_base + n * n.saturating_sub(1);
    let a_base = r_base + if config.rotation { n } else { 0 };
    VarMap {
        copies: copies.len(),
        sheets: k,
        width,
        height,
        rotation: config.rotation,
        s_base,
        px_base,
        py_base,
        l_base,
        u_base,
        r_base,
        a_base,
        total: a_base + k - 1,
    }
}

/// Clause counts per constraint family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClauseCounts {
    pub at_least_one: usize,
    pub at_most_one: usize,
    pub order_axioms: usize,
    pub non_overlap: usize,
    pub link_horizontal: usize,
    pub link_vertical: usize,
    pub domain: usize,
    pub sheet_usage: usize,
    pub sb_large_items: usize,
    pub sb_same_type: usize,
    pub sb_orientation: usize,
    pub sb_sheet_order: usize,
}

impl ClauseCounts {
    pub fn exactly_one(&self) -> usize {
        self.at_least_one + self.at_most_one
    }

    pub fn symmetry_breaking(&self) -> usize {
        self.sb_large_items + self.sb_same_type + self.sb_orientation + self.sb_sheet_order
    }

    pub fn total(&self) -> usize {
        self.exactly_one()
            + self.order_axioms
            + self.non_overlap
            + self.link_horizontal
            + self.link_vertical
            + self.domain
            + self.sheet_usage
            + self.symmetry_breaking()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    AtLeastOne,
    AtMostOne,
    OrderAxiom,
    NonOverlap,
    LinkHorizontal,
    LinkVertical,
    Domain,
    SheetUsage,
    SbLargeItems,
    SbSameType,
    SbOrientation,
    SbSheetOrder,
}

/// Accumulates folded clauses and their family counters.
#[derive(Debug, Clone)]
pub struct ClauseSink {
    formula: CnfFormula,
    counts: ClauseCounts,
}

impl ClauseSink {
    pub fn new(num_vars: u32) -> Self {
        ClauseSink { formula: CnfFormula::new(num_vars), counts: ClauseCounts::default() }
    }

    /// Emits `terms` as a clause: dropped if a constant is true, constant
    /// false terms removed.
    pub fn emit(&mut self, family: Family, terms: &[Term]) {
        let mut lits = Vec::with_capacity(terms.len());
        for t in terms {
            match *t {
                Term::Const(true) => return,
                Term::Const(false) => {}
                Term::Lit(l) => lits.push(l),
            }
        }
        let c = &mut self.counts;
        *match family {
            Family::AtLeastOne => &mut c.at_least_one,
            Family::AtMostOne => &mut c.at_most_one,
            Family::OrderAxiom => &mut c.order_axioms,
            Family::NonOverlap => &mut c.non_overlap,
            Family::LinkHorizontal => &mut c.link_horizontal,
            Family::LinkVertical => &mut c.link_vertical,
            Family::Domain => &mut c.domain,
            Family::SheetUsage => &mut c.sheet_usage,
            Family::SbLargeItems => &mut c.sb_large_items,
            Family::SbSameType => &mut c.sb_same_type,
            Family::SbOrientation => &mut c.sb_orientation,
            Family::SbSheetOrder => &mut c.sb_sheet_order,
        } += 1;
        self.formula.add_clause(lits);
    }

    pub fn counts(&self) -> &ClauseCounts {
        &self.counts
    }
}

/// An encoded formula with its variable map and audit counters.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub varmap: VarMap,
    pub formula: CnfFormula,
    pub counts: ClauseCounts,
    pub config: EncodeConfig,
}

/// Orientation choices for a copy, as (effective width, effective height,
/// clause literal that switches the orientation off).
fn orientations(copy: &Copy, rot: Option<i32>) -> Vec<(u32, u32, Term)> {
    match rot {
        None => vec![(copy.width, copy.height, Term::Const(false))],
        Some(r) => vec![(copy.width, copy.height, Term::Lit(r)), (copy.height, copy.width, Term::Lit(-r))],
    }
}

/// Builds the formula for `config.sheets` sheets.
pub fn encode(copies: &[Copy], instance: &Instance, config: &EncodeConfig) -> Result<Encoding, EncodeError> {
    if config.sheets == 0 {
        return Err(EncodeError::NoSheets);
    }
    if copies.is_empty() {
        return Err(EncodeError::NoCopies);
    }
    let (sw, sh) = (instance.sheet_width, instance.sheet_height);
    for c in copies {
        let unrotated = c.width <= sw && c.height <= sh;
        if !config.rotation && !unrotated {
            return Err(EncodeError::NeedsRotation(c.label()));
        }
        if config.rotation && !unrotated && !(c.height <= sw && c.width <= sh) {
            return Err(EncodeError::NoOrientation(c.label()));
        }
    }

    let vm = allocate_vars(copies, sw, sh, config);
    let mut sink = ClauseSink::new(vm.total());
    let n = copies.len();
    let k = config.sheets;
    let (wi, hi) = (i64::from(sw), i64::from(sh));

    // exactly one sheet per copy
    for c in 0..n {
        let alo: Vec<Term> = (1..=k).map(|j| Term::Lit(vm.s(c, j))).collect();
        sink.emit(Family::AtLeastOne, &alo);
        for j1 in 1..=k {
            for j2 in j1 + 1..=k {
                sink.emit(Family::AtMostOne, &[Term::Lit(-vm.s(c, j1)), Term::Lit(-vm.s(c, j2))]);
            }
        }
    }

    // order axioms
    for c in 0..n {
        for e in 0..wi - 2 {
            sink.emit(Family::OrderAxiom, &[!vm.px(c, e), vm.px(c, e + 1)]);
        }
        for f in 0..hi - 2 {
            sink.emit(Family::OrderAxiom, &[!vm.py(c, f), vm.py(c, f + 1)]);
        }
    }

    // conditional non-overlap
    for c in 0..n {
        for d in c + 1..n {
            for j in 1..=k {
                sink.emit(
                    Family::NonOverlap,
                    &[
                        Term::Lit(-vm.s(c, j)),
                        Term::Lit(-vm.s(d, j)),
                        Term::Lit(vm.left(c, d)),
                        Term::Lit(vm.left(d, c)),
                        Term::Lit(vm.below(c, d)),
                        Term::Lit(vm.below(d, c)),
                    ],
                );
            }
        }
    }

    // relative position -> coordinates, guarded by the shared sheet
    for c in 0..n {
        let orients = orientations(&copies[c], vm.rotated(c));
        for d in 0..n {
            if c == d {
                continue;
            }
            for &(ew, eh, off) in &orients {
                for j in 1..=k {
                    let g1 = Term::Lit(-vm.s(c, j));
                    let g2 = Term::Lit(-vm.s(d, j));
                    let rel = Term::Lit(-vm.left(c, d));
                    let w = i64::from(ew);
                    for e in -1..=wi - w - 1 {
                        sink.emit(Family::LinkHorizontal, &[g1, g2, off, rel, vm.px(c, e), !vm.px(d, e + w)]);
                    }
                    if wi - w - 1 < -1 {
                        // this orientation is wider than the sheet
                        sink.emit(Family::LinkHorizontal, &[g1, g2, off, rel, !vm.px(d, w - 1)]);
                    }
                    let rel = Term::Lit(-vm.below(c, d));
                    let h = i64::from(eh);
                    for f in -1..=hi - h - 1 {
                        sink.emit(Family::LinkVertical, &[g1, g2, off, rel, vm.py(c, f), !vm.py(d, f + h)]);
                    }
                    if hi - h - 1 < -1 {
                        sink.emit(Family::LinkVertical, &[g1, g2, off, rel, !vm.py(d, h - 1)]);
                    }
                }
            }
        }
    }

    // domain: the copy stays inside the sheet
    for (c, copy) in copies.iter().enumerate() {
        let (w, h) = (i64::from(copy.width), i64::from(copy.height));
        match vm.rotated(c) {
            Some(r) => {
                sink.emit(Family::Domain, &[Term::Lit(r), vm.px(c, wi - w)]);
                sink.emit(Family::Domain, &[Term::Lit(-r), vm.px(c, wi - h)]);
                sink.emit(Family::Domain, &[Term::Lit(r), vm.py(c, hi - h)]);
                sink.emit(Family::Domain, &[Term::Lit(-r), vm.py(c, hi - w)]);
            }
            None => {
                sink.emit(Family::Domain, &[vm.px(c, wi - w)]);
                sink.emit(Family::Domain, &[vm.py(c, hi - h)]);
            }
        }
    }

    // sheet usage
    for c in 0..n {
        for j in 1..=k {
            sink.emit(Family::SheetUsage, &[Term::Lit(-vm.s(c, j)), Term::Lit(vm.used(j))]);
        }
    }

    if config.symmetry_breaking {
        encode_symmetry_breaking(copies, instance, config, &vm, &mut sink)?;
    }

    Ok(Encoding { varmap: vm, formula: sink.formula, counts: sink.counts, config: *config })
}

/// Orientations a copy may take once forced orientations are fixed:
/// unrotated only when it is square or only fits unrotated, rotated only
/// when only that fits.
fn permitted(copy: &Copy, instance: &Instance, rotation: bool) -> Result<Vec<(u32, u32)>, EncodeError> {
    let (sw, sh) = (instance.sheet_width, instance.sheet_height);
    let plain = copy.width <= sw && copy.height <= sh;
    if !rotation {
        return Ok(vec![(copy.width, copy.height)]);
    }
    let turned = copy.height <= sw && copy.width <= sh;
    Ok(match (plain, turned) {
        (true, true) if copy.width != copy.height => {
            vec![(copy.width, copy.height), (copy.height, copy.width)]
        }
        (true, _) => vec![(copy.width, copy.height)],
        (false, true) => vec![(copy.height, copy.width)],
        (false, false) => return Err(EncodeError::NoOrientation(copy.label())),
    })
}

/// Appends the four symmetry-breaking rule families:
/// large-item exclusion of relative positions, ordering of same-type
/// copies, fixing forced orientations and using sheets in index order.
pub fn encode_symmetry_breaking(
    copies: &[Copy],
    instance: &Instance,
    config: &EncodeConfig,
    vm: &VarMap,
    sink: &mut ClauseSink,
) -> Result<(), EncodeError> {
    let n = copies.len();
    let allowed: Vec<Vec<(u32, u32)>> =
        copies.iter().map(|c| permitted(c, instance, config.rotation)).collect::<Result<_, _>>()?;

    // large items: no horizontal (vertical) side-by-side in any orientation
    for c in 0..n {
        for d in c + 1..n {
            let min_w = allowed[c].iter().map(|o| o.0).min().unwrap() + allowed[d].iter().map(|o| o.0).min().unwrap();
            if min_w > instance.sheet_width {
                sink.emit(Family::SbLargeItems, &[Term::Lit(-vm.left(c, d))]);
                sink.emit(Family::SbLargeItems, &[Term::Lit(-vm.left(d, c))]);
            }
            let min_h = allowed[c].iter().map(|o| o.1).min().unwrap() + allowed[d].iter().map(|o| o.1).min().unwrap();
            if min_h > instance.sheet_height {
                sink.emit(Family::SbLargeItems, &[Term::Lit(-vm.below(c, d))]);
                sink.emit(Family::SbLargeItems, &[Term::Lit(-vm.below(d, c))]);
            }
        }
    }

    // a later copy of a type is never strictly left of an earlier one
    for i in 0..n {
        for j in i + 1..n {
            if copies[i].type_index == copies[j].type_index {
                sink.emit(Family::SbSameType, &[Term::Lit(-vm.left(j, i))]);
            }
        }
    }

    // forced orientations
    if vm.rotation() {
        for (c, copy) in copies.iter().enumerate() {
            let r = vm.rotated(c).unwrap();
            let only = &allowed[c];
            let fixed = if only.len() == 1 {
                if only[0] == (copy.width, copy.height) {
                    -r
                } else {
                    r
                }
            } else {
                continue;
            };
            sink.emit(Family::SbOrientation, &[Term::Lit(fixed)]);
        }
    }

    // sheets are used in index order
    for j in 1..config.sheets {
        sink.emit(Family::SbSheetOrder, &[Term::Lit(-vm.used(j + 1)), Term::Lit(vm.used(j))]);
    }
    Ok(())
}

/// Reads a packing back from a model of the formula.
pub fn decode(model: &Model, vm: &VarMap, copies: &[Copy]) -> Result<Solution, EncodeError> {
    let mut placements = Vec::with_capacity(copies.len());
    for (c, copy) in copies.iter().enumerate() {
        let sheets: Vec<u32> = (1..=vm.sheets()).filter(|&j| model.value(vm.s(c, j))).collect();
        if sheets.len() != 1 {
            return Err(EncodeError::SheetAssignment { copy: copy.label(), count: sheets.len() });
        }
        let first_true = |term: &dyn Fn(i64) -> Term, extent: u32| -> u32 {
            (0..i64::from(extent) - 1)
                .find(|&e| matches!(term(e), Term::Lit(l) if model.value(l)))
                .map_or(extent - 1, |e| e as u32)
        };
        let x = first_true(&|e| vm.px(c, e), vm.width);
        let y = first_true(&|f| vm.py(c, f), vm.height);
        let rotated = vm.rotated(c).is_some_and(|r| model.value(r));
        placements.push(Placement { copy: *copy, sheet: sheets[0], x, y, rotated });
    }
    Ok(Solution::new(placements))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{expand_demands, ItemType};
    use crate::satcore::{Solver, SolverConfig};
    use crate::verify::verify_solution;

    fn inst(w: u32, h: u32, types: &[(u32, u32, u32)]) -> Instance {
        Instance::new("t", w, h, types.iter().map(|&(a, b, d)| ItemType::new(a, b, d)).collect()).unwrap()
    }

    fn encode_inst(i: &Instance, k: u32, rot: bool, sb: bool) -> Encoding {
        encode(&expand_demands(i), i, &EncodeConfig::new(k, rot, sb)).unwrap()
    }

    fn closed_form_vars(n: u32, k: u32, w: u32, h: u32, rot: bool) -> u32 {
        n * k + n * (w - 1) + n * (h - 1) + 2 * n * (n - 1) + k + if rot { n } else { 0 }
    }

    #[test]
    fn variable_counts() {
        let two_sheet = fixtures::two_sheet();
        let copies = expand_demands(&two_sheet);
        assert_eq!(allocate_vars(&copies, 6, 4, &EncodeConfig::new(2, false, false)).total(), 122);
        assert_eq!(allocate_vars(&copies, 6, 4, &EncodeConfig::new(2, true, false)).total(), 128);
        assert_eq!(closed_form_vars(6, 2, 6, 4, false), 122);
        let one = expand_demands(&inst(1, 1, &[(1, 1, 1)]));
        assert_eq!(allocate_vars(&one, 1, 1, &EncodeConfig::new(1, false, false)).total(), 2);
    }

    #[test]
    fn variable_map_is_a_bijection() {
        for rot in [false, true] {
            let two_sheet = fixtures::two_sheet();
            let copies = expand_demands(&two_sheet);
            let vm = allocate_vars(&copies, 6, 4, &EncodeConfig::new(3, rot, false));
            let mut ids = Vec::new();
            for c in 0..copies.len() {
                ids.extend((1..=3).map(|j| vm.s(c, j)));
                for e in -1..=6 {
                    if let Term::Lit(l) = vm.px(c, e) {
                        ids.push(l);
                    }
                }
                for f in -1..=4 {
                    if let Term::Lit(l) = vm.py(c, f) {
                        ids.push(l);
                    }
                }
                for d in 0..copies.len() {
                    if c != d {
                        ids.push(vm.left(c, d));
                        ids.push(vm.below(c, d));
                    }
                }
                ids.extend(vm.rotated(c));
            }
            ids.extend((1..=3).map(|j| vm.used(j)));
            ids.sort_unstable();
            let expected: Vec<i32> = (1..=vm.total() as i32).collect();
            assert_eq!(ids, expected);
            assert_eq!(vm.total(), closed_form_vars(6, 3, 6, 4, rot));
        }
    }

    #[test]
    fn thresholds_fold_at_the_edges() {
        let two_sheet = fixtures::two_sheet();
        let vm = allocate_vars(&expand_demands(&two_sheet), 6, 4, &EncodeConfig::new(2, false, false));
        assert_eq!(vm.px(0, -1), Term::Const(false));
        assert_eq!(vm.px(0, 5), Term::Const(true));
        assert!(matches!(vm.px(0, 4), Term::Lit(_)));
        assert_eq!(vm.py(0, 3), Term::Const(true));
    }

    #[test]
    fn two_sheet_family_counts() {
        let e = encode_inst(&fixtures::two_sheet(), 2, false, false);
        assert_eq!(e.formula.num_vars(), 122);
        assert_eq!(e.counts.exactly_one(), 12);
        assert_eq!(e.counts.non_overlap, 30);
        assert_eq!(e.counts.order_axioms, 6 * (4 + 2));
        assert_eq!(e.counts.sheet_usage, 12);
        assert_eq!(e.counts.symmetry_breaking(), 0);
        assert_eq!(e.counts.total(), e.formula.num_clauses());
        assert!(e.formula.is_well_formed());
    }

    #[test]
    fn sb_counts() {
        let e = encode_inst(&fixtures::two_sheet(), 3, false, true);
        assert_eq!(e.counts.sb_sheet_order, 2);
        // three same-type pairs per type
        assert_eq!(e.counts.sb_same_type, 6);
        // 3x2 + 3x2 is not wider than 6, and heights 2+2 fit 4
        assert_eq!(e.counts.sb_large_items, 0);
        assert_eq!(e.counts.sb_orientation, 0);
    }

    #[test]
    fn sb_fixes_square_and_forced_orientations() {
        let i = inst(6, 4, &[(2, 2, 1), (5, 2, 1), (2, 5, 1), (3, 3, 1)]);
        let e = encode_inst(&i, 1, true, true);
        let vm = &e.varmap;
        let units: Vec<i32> = e.formula.clauses().iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
        assert!(units.contains(&-vm.rotated(0).unwrap()));
        assert!(units.contains(&-vm.rotated(1).unwrap()));
        assert!(units.contains(&vm.rotated(2).unwrap()));
        assert!(units.contains(&-vm.rotated(3).unwrap()));
        assert_eq!(e.counts.sb_orientation, 4);
    }

    #[test]
    fn sb_large_items_blocks_side_by_side() {
        let i = inst(6, 3, &[(4, 1, 2)]);
        for rot in [false, true] {
            let e = encode_inst(&i, 1, rot, true);
            let vm = &e.varmap;
            let units: Vec<i32> = e.formula.clauses().iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
            assert!(units.contains(&-vm.left(0, 1)));
            assert!(units.contains(&-vm.left(1, 0)));
            assert!(!units.contains(&-vm.below(0, 1)));
        }
    }

    fn solve(e: &Encoding) -> Option<Model> {
        let mut s = Solver::from_formula(&e.formula, SolverConfig::default());
        let v = s.solve();
        if let Some(m) = &v.model {
            assert!(e.formula.satisfied_by(m));
        }
        v.model
    }

    #[test]
    fn single_cell_instance() {
        let i = inst(1, 1, &[(1, 1, 1)]);
        let e = encode_inst(&i, 1, false, false);
        let m = solve(&e).expect("satisfiable");
        assert!(m.value(e.varmap.s(0, 1)) && m.value(e.varmap.used(1)));
        let sol = decode(&m, &e.varmap, &expand_demands(&i)).unwrap();
        assert_eq!((sol.placements[0].x, sol.placements[0].y), (0, 0));
    }

    #[test]
    fn two_dominoes_need_two_sheets() {
        let i = inst(2, 1, &[(2, 1, 2)]);
        for (rot, sb) in [(false, false), (false, true), (true, false), (true, true)] {
            assert!(solve(&encode_inst(&i, 1, rot, sb)).is_none());
            assert!(solve(&encode_inst(&i, 2, rot, sb)).is_some());
        }
    }

    #[test]
    fn two_sheet_decodes_to_valid_packing() {
        let two_sheet = fixtures::two_sheet();
        for (rot, sb) in [(false, false), (false, true), (true, false), (true, true)] {
            let e = encode_inst(&two_sheet, 2, rot, sb);
            let m = solve(&e).unwrap();
            let sol = decode(&m, &e.varmap, &expand_demands(&two_sheet)).unwrap();
            assert!(sol.sheets_used <= 2);
            let r = verify_solution(&two_sheet, &sol, rot);
            assert!(r.ok, "{:?}", r.violations);
            assert!(solve(&encode_inst(&two_sheet, 1, rot, sb)).is_none());
        }
    }

    #[test]
    fn rotation_only_fit_is_rejected_without_rotation() {
        let i = inst(6, 4, &[(2, 5, 1)]);
        let copies = expand_demands(&i);
        assert!(matches!(
            encode(&copies, &i, &EncodeConfig::new(1, false, false)),
            Err(EncodeError::NeedsRotation(_))
        ));
        let e = encode(&copies, &i, &EncodeConfig::new(1, true, false)).unwrap();
        let m = solve(&e).unwrap();
        let sol = decode(&m, &e.varmap, &copies).unwrap();
        assert!(sol.placements[0].rotated);
        assert!(verify_solution(&i, &sol, true).ok);
    }

    #[test]
    fn decode_rejects_inconsistent_models() {
        let i = inst(2, 2, &[(1, 1, 1)]);
        let e = encode_inst(&i, 2, false, false);
        let none = Model::from_values(vec![false; e.varmap.total() as usize]);
        assert!(matches!(
            decode(&none, &e.varmap, &expand_demands(&i)),
            Err(EncodeError::SheetAssignment { count: 0, .. })
        ));
        assert_eq!(
            encode(&expand_demands(&i), &i, &EncodeConfig::new(0, false, false)).unwrap_err(),
            EncodeError::NoSheets
        );
    }

    #[test]
    fn satisfiability_is_monotone_in_sheets() {
        let i = inst(4, 3, &[(3, 2, 2), (2, 2, 2)]);
        let mut prev = false;
        for k in 1..=4 {
            let sat = solve(&encode_inst(&i, k, false, true)).is_some();
            assert!(!prev || sat);
            prev = sat;
        }
        assert!(prev);
    }
}
