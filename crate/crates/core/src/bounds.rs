//! Sheet-count bounds: the area lower bound and a shelf First-Fit
//! Decreasing upper bound with its witness packing.

use crate::model::{expand_demands, Copy, Instance, ModelError, Placement, Solution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub lower: u32,
    pub upper: u32,
    pub ffd_solution: Solution,
}

/// `ceil(total item area / sheet area)`, at least 1.
pub fn lower_bound_area(instance: &Instance) -> u32 {
    let lb = instance.total_item_area().div_ceil(instance.sheet_area());
    lb.max(1) as u32
}

#[derive(Debug)]
struct Shelf {
    y: u32,
    height: u32,
    used_width: u32,
}

#[derive(Debug, Default)]
struct Sheet {
    shelves: Vec<Shelf>,
    used_height: u32,
}

/// Shelf-based First-Fit Decreasing.
///
/// Copies are sorted by non-increasing height, then width, then type index
/// and ordinal. A copy goes to the first sheet (in opening order) that can
/// take it, either on an existing shelf (scanned bottom-up) or on a new shelf
/// opened at the sheet's used height. Copies are left unrotated unless they
/// only fit rotated, which requires `rotation`.
pub fn ffd_upper_bound(instance: &Instance, rotation: bool) -> Result<(u32, Solution), ModelError> {
    let (sw, sh) = (instance.sheet_width, instance.sheet_height);
    let mut items: Vec<(Copy, bool)> = Vec::with_capacity(instance.copy_count());
    for c in expand_demands(instance) {
        let rotated = if c.width <= sw && c.height <= sh {
            false
        } else if rotation && c.height <= sw && c.width <= sh {
            true
        } else {
            return Err(ModelError::Invalid(format!(
                "copy {} ({}x{}) fits in no permitted orientation",
                c.label(),
                c.width,
                c.height
            )));
        };
        items.push((c, rotated));
    }
    items.sort_by(|(a, ra), (b, rb)| {
        let (aw, ah) = a.dims(*ra);
        let (bw, bh) = b.dims(*rb);
        bh.cmp(&ah)
            .then(bw.cmp(&aw))
            .then(a.type_index.cmp(&b.type_index))
            .then(a.ordinal.cmp(&b.ordinal))
    });

    let mut sheets: Vec<Sheet> = Vec::new();
    let mut placements = Vec::with_capacity(items.len());
    for (copy, rotated) in items {
        let (w, h) = copy.dims(rotated);
        let mut spot = None;
        for (j, sheet) in sheets.iter_mut().enumerate() {
            if let Some(shelf) =
                sheet.shelves.iter_mut().find(|s| h <= s.height && s.used_width + w <= sw)
            {
                spot = Some((j, shelf.used_width, shelf.y));
                shelf.used_width += w;
                break;
            }
            if sheet.used_height + h <= sh {
                let y = sheet.used_height;
                sheet.shelves.push(Shelf { y, height: h, used_width: w });
                sheet.used_height += h;
                spot = Some((j, 0, y));
                break;
            }
        }
        let (j, x, y) = spot.unwrap_or_else(|| {
            sheets.push(Sheet {
                shelves: vec![Shelf { y: 0, height: h, used_width: w }],
                used_height: h,
            });
            (sheets.len() - 1, 0, 0)
        });
        placements.push(Placement { copy, sheet: j as u32 + 1, x, y, rotated });
    }
    placements.sort_by_key(|p| (p.copy.type_index, p.copy.ordinal));
    let solution = Solution::new(placements);
    Ok((solution.sheets_used, solution))
}

/// Area lower bound and FFD upper bound for the given rotation mode.
pub fn compute_bounds(instance: &Instance, rotation: bool) -> Result<Bounds, ModelError> {
    instance.check_mode(rotation)?;
    let (upper, ffd_solution) = ffd_upper_bound(instance, rotation)?;
    let lower = lower_bound_area(instance).min(upper);
    Ok(Bounds { lower, upper, ffd_solution })
}
