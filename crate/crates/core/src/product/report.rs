use std::fmt::Write as _;

use serde_json::json;

use crate::cochain::IntCochain;
use crate::complex::CubeId;

pub const CSV_HEADER: &str = "t,cube,product_value,cup_value,equal,variant2_value,variant2_expected,transversality_ok";

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub t: f64,
    pub cube: CubeId,
    pub product_value: i64,
    pub cup_value: i64,
    pub equal: bool,
    pub variant2_value: i64,
    pub variant2_expected: i64,
    pub transversality_ok: bool,
    /// Why the row could not be computed, if it could not.
    pub note: Option<String>,
}

impl ComparisonRow {
    pub fn variant2_equal(&self) -> bool {
        self.transversality_ok && self.variant2_value == self.variant2_expected
    }

    pub fn full_match(&self) -> bool {
        self.equal && self.variant2_equal()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub t_found: Option<f64>,
    /// cI of every flowed input agreed with cI of the input on the grid.
    pub flow_invariant: bool,
    /// Extra t values past the threshold and whether they matched.
    pub stability: Vec<(f64, bool)>,
    pub cup: IntCochain,
    /// (−1)^{|W||V|} cI(V) ⌣ cI(W).
    pub cup_variant2: IntCochain,
}

impl ComparisonReport {
    pub fn rows_at(&self, t: f64) -> impl Iterator<Item = &ComparisonRow> {
        self.rows.iter().filter(move |r| r.t == t)
    }

    pub fn is_stable(&self) -> bool {
        self.stability.iter().all(|&(_, ok)| ok)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.t, r.cube, r.product_value, r.cup_value, r.equal, r.variant2_value, r.variant2_expected, r.transversality_ok
            )
            .unwrap();
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "t": r.t,
                    "cube": r.cube,
                    "product_value": r.product_value,
                    "cup_value": r.cup_value,
                    "equal": r.equal,
                    "variant2_value": r.variant2_value,
                    "variant2_expected": r.variant2_expected,
                    "transversality_ok": r.transversality_ok,
                    "note": r.note,
                })
            })
            .collect();
        let v = json!({
            "t_found": self.t_found,
            "flow_invariant": self.flow_invariant,
            "stability": self.stability.iter().map(|(t, ok)| json!({"t": t, "ok": ok})).collect::<Vec<_>>(),
            "rows": rows,
        });
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}
