//! Rows (N, q, f) whose genus-2 curve y² = f(x) has discriminant q⁴N up to powers of 2.

use super::intpoly::{curve_disc, disc, is_prime, split_p, IntPoly};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// The shipped table.
pub const TABLE1_JSON: &str = include_str!("../../fixtures/table1.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    #[serde(rename = "N")]
    pub n: u64,
    pub q: u64,
    pub f: Vec<i64>,
}

#[derive(Deserialize)]
struct Table1File {
    rows: Vec<Table1Row>,
}

pub fn parse_table1(json: &str) -> Result<Vec<Table1Row>> {
    let t: Table1File = serde_json::from_str(json).map_err(|e| Error::Invalid(format!("malformed table: {e}")))?;
    Ok(t.rows)
}

pub fn table1() -> Vec<Table1Row> {
    parse_table1(TABLE1_JSON).expect("shipped fixture parses")
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Report {
    pub row: Table1Row,
    pub n_prime: bool,
    pub q_prime: bool,
    pub quintic_disc: String,
    pub curve_disc: String,
    pub odd_part: String,
    pub expected_odd_part: String,
    pub pass: bool,
}

/// Odd part of the sextic discriminant of y² = f(x) against q⁴N.
pub fn table1_check(row: &Table1Row) -> Result<Table1Report> {
    if row.f.len() != 6 {
        return Err(Error::Invalid(format!("row for N = {} needs six coefficients", row.n)));
    }
    let f = IntPoly::from_i64(&row.f)?;
    if f.degree() != 5 {
        return Err(Error::Invalid("leading coefficient a_5 is zero".into()));
    }
    let d5 = disc(&f)?;
    let d6 = curve_disc(&f)?;
    let (_, odd) = split_p(&d6, 2);
    let want = BigInt::from(row.q).pow(4) * BigInt::from(row.n);
    let n_prime = is_prime(&BigInt::from(row.n));
    let q_prime = is_prime(&BigInt::from(row.q));
    Ok(Table1Report {
        row: row.clone(),
        n_prime,
        q_prime,
        quintic_disc: d5.to_string(),
        curve_disc: d6.to_string(),
        odd_part: odd.to_string(),
        expected_odd_part: want.to_string(),
        pass: n_prime && q_prime && odd == want,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rows_pass() {
        let rows = table1();
        assert_eq!(rows.len(), 9);
        for r in &rows {
            let rep = table1_check(r).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
        let first = table1_check(&rows[0]).unwrap();
        assert_eq!(first.odd_part, (81 * 1061).to_string());
        assert_eq!(first.quintic_disc, "271616");
    }

    #[test]
    fn perturbed_q_fails() {
        let mut r = table1()[0].clone();
        r.q += 2;
        assert!(!table1_check(&r).unwrap().pass);
        r.f.pop();
        assert!(table1_check(&r).is_err());
        assert!(parse_table1("{").is_err());
    }
}
