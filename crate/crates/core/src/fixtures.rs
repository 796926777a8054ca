//! Small reference instances shared by tests, docs and the bindings.

use crate::model::{expand_demands, Instance, ItemType, Placement, Solution};

/// 6x4 sheet with three 3x2 and three 2x2 items; two sheets are optimal.
pub fn two_sheet() -> Instance {
    Instance::new("two_sheet", 6, 4, vec![ItemType::new(3, 2, 3), ItemType::new(2, 2, 3)])
        .expect("fixture is valid")
}

/// The two-sheet layout drawn for [`two_sheet`].
pub fn two_sheet_solution() -> Solution {
    let copies = expand_demands(&two_sheet());
    let at = |i: usize, sheet, x, y| Placement { copy: copies[i], sheet, x, y, rotated: false };
    Solution::new(vec![
        at(0, 1, 0, 0),
        at(1, 1, 3, 0),
        at(2, 2, 0, 0),
        at(3, 1, 0, 2),
        at(4, 1, 2, 2),
        at(5, 1, 4, 2),
    ])
}

pub const TWO_SHEET_TEXT: &str = "6 4\n2\n3 2 3\n2 2 3\n";
