//! The oval-type table: which classes occur in PG(2,2^n).

use serde::Serialize;

use crate::arcs::{
    canonical_conic, pointed_conic, search_o_permutations, search_ovals, HyperovalSearch, OPermutationOutcome,
    OvalCensus, OvalClass, SearchOptions,
};
use crate::cert::{oval_certificate, verify_opoly_certificate, OPolynomialCertificate, OvalCertificate};
use crate::error::Result;
use crate::galois::Elem;
use crate::par::Exec;
use crate::plane::pg2_order;

pub const ROW_LABELS: [&str; 3] = ["ordinary conic", "pointed-conic", "irregular oval"];

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Cell {
    Yes {
        witness: OvalCertificate,
        opolynomial: Option<OPolynomialCertificate>,
    },
    /// Absent from an exhaustive census.
    No {
        ovals_examined: u64,
    },
    Inconclusive {
        reason: String,
    },
}

impl Cell {
    pub fn word(&self) -> &'static str {
        match self {
            Cell::Yes { .. } => "yes",
            Cell::No { .. } => "no",
            Cell::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Column {
    pub n: u32,
    pub q: u64,
    pub census: Option<OvalCensus>,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, Default)]
pub struct TableOptions {
    /// Include n = 4 with an o-permutation search for the irregular cell.
    pub long: bool,
    /// Node budget of that search.
    pub budget: Option<u64>,
    /// A supplied o-polynomial for the n = 4 irregular cell.
    pub opoly: Option<Vec<u32>>,
    /// Skip the n = 4 column.
    pub max_n: Option<u32>,
}

pub const DEFAULT_LONG_BUDGET: u64 = 2_000_000_000;

fn census_column(n: u32, exec: &Exec) -> Result<Column> {
    let q = 1u64 << n;
    let plane = pg2_order(q)?;
    let census = search_ovals(&plane, &SearchOptions::exhaustive().classify(true), exec)?;
    let classes = census.classes.clone().expect("classified");
    let cells = OvalClass::ALL
        .into_iter()
        .map(|c| match census.witnesses.get(&c) {
            Some(w) => Ok(Cell::Yes { witness: oval_certificate(&plane, w)?, opolynomial: None }),
            None => Ok(Cell::No { ovals_examined: census.ovals }),
        })
        .collect::<Result<Vec<_>>>()?;
    debug_assert_eq!(classes.found().len(), cells.iter().filter(|c| c.word() == "yes").count());
    Ok(Column { n, q, census: Some(census), cells })
}

fn long_column(opts: &TableOptions, exec: &Exec) -> Result<Column> {
    let q = 16u64;
    let plane = pg2_order(q)?;
    let conic = canonical_conic(&plane)?;
    let x = conic.points()[0];
    let pointed = pointed_conic(&plane, conic.points(), x)?;
    let mut cells = vec![
        Cell::Yes { witness: oval_certificate(&plane, conic.points())?, opolynomial: None },
        Cell::Yes { witness: oval_certificate(&plane, pointed.points())?, opolynomial: None },
    ];
    let field = plane.field().expect("PG").describe();
    let supplied = opts.opoly.clone().map(|coeffs| OPolynomialCertificate {
        kind: "o_polynomial".into(),
        plane: plane.name().into(),
        field: field.clone(),
        coeffs,
    });
    let irregular = if let Some(cert) = supplied {
        match verify_opoly_certificate(&plane, &cert) {
            Ok(_) => {
                let coeffs: Vec<Elem> = cert.coeffs.iter().map(|&c| Elem(c)).collect();
                let h = crate::arcs::opoly_hyperoval(&plane, &coeffs)?;
                Cell::Yes { witness: oval_certificate(&plane, &h.points()[1..])?, opolynomial: Some(cert) }
            }
            Err(e) => Cell::Inconclusive { reason: format!("supplied o-polynomial rejected: {e}") },
        }
    } else if opts.long {
        let budget = opts.budget.unwrap_or(DEFAULT_LONG_BUDGET);
        match search_o_permutations(&plane, HyperovalSearch { budget }, exec)? {
            OPermutationOutcome::Found { coeffs, oval, .. } => Cell::Yes {
                witness: oval_certificate(&plane, oval.points())?,
                opolynomial: Some(OPolynomialCertificate {
                    kind: "o_polynomial".into(),
                    plane: plane.name().into(),
                    field,
                    coeffs,
                }),
            },
            OPermutationOutcome::BudgetExceeded { nodes, .. } => {
                Cell::Inconclusive { reason: format!("budget exhausted after {nodes} nodes") }
            }
            OPermutationOutcome::Exhausted { permutations, .. } => {
                Cell::Inconclusive { reason: format!("all {permutations} normalized o-permutations contain a conic") }
            }
        }
    } else {
        Cell::Inconclusive { reason: "long mode required".into() }
    };
    cells.push(irregular);
    Ok(Column { n: 4, q, census: None, cells })
}

pub fn reproduce_table(opts: &TableOptions, exec: &Exec) -> Result<TableReport> {
    let max_n = opts.max_n.unwrap_or(4).min(4);
    let mut columns = (1..=max_n.min(3)).map(|n| census_column(n, exec)).collect::<Result<Vec<_>>>()?;
    if max_n >= 4 {
        columns.push(long_column(opts, exec)?);
    }
    Ok(TableReport { columns })
}

impl TableReport {
    pub fn cell(&self, n: u32, class: OvalClass) -> Option<&Cell> {
        let row = OvalClass::ALL.iter().position(|&c| c == class)?;
        self.columns.iter().find(|c| c.n == n).map(|c| &c.cells[row])
    }

    /// One row per oval class, one column per n; the last column is
    /// evaluated at n = 4.
    pub fn to_text(&self) -> String {
        let width = 16;
        let label = |n: u32| if n >= 4 { ">=4".to_string() } else { n.to_string() };
        let text = |cell: &Cell| match cell {
            Cell::Inconclusive { reason } if reason == "long mode required" => format!("inconclusive ({reason})"),
            cell => cell.word().to_string(),
        };
        let col = self.columns.iter().flat_map(|c| c.cells.iter().map(|x| text(x).len())).max().unwrap_or(3) + 2;
        let mut s = format!("{:<width$}|", "n");
        for c in &self.columns {
            s += &format!(" {:<col$}", label(c.n));
        }
        s += "\n";
        s += &"-".repeat(width + 1 + (col + 1) * self.columns.len());
        s += "\n";
        for (row, name) in ROW_LABELS.iter().enumerate() {
            s += &format!("{name:<width$}|");
            for c in &self.columns {
                s += &format!(" {:<col$}", text(&c.cells[row]));
            }
            s += "\n";
        }
        s += "\n";
        for c in &self.columns {
            if let Some(census) = &c.census {
                s += &format!(
                    "n={}: exhaustive census of PG(2,{}): {} ovals, {} hyperovals\n",
                    c.n, c.q, census.ovals, census.hyperovals
                );
            }
            for (row, cell) in c.cells.iter().enumerate() {
                match cell {
                    Cell::Yes { witness, opolynomial } => {
                        s += &format!("  {}: witness {:?}", ROW_LABELS[row], witness.points);
                        if let Some(o) = opolynomial {
                            s += &format!(" from o-polynomial {:?}", o.coeffs);
                        }
                        s += "\n";
                    }
                    Cell::No { ovals_examined } => {
                        s += &format!("  {}: absent among all {ovals_examined} ovals\n", ROW_LABELS[row])
                    }
                    Cell::Inconclusive { reason } => s += &format!("  {}: inconclusive ({reason})\n", ROW_LABELS[row]),
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_columns() {
        let t = reproduce_table(&TableOptions { max_n: Some(2), ..Default::default() }, &Exec::sequential()).unwrap();
        for n in [1, 2] {
            assert_eq!(t.cell(n, OvalClass::Conic).unwrap().word(), "yes");
            assert_eq!(t.cell(n, OvalClass::PointedConic).unwrap().word(), "no");
            assert_eq!(t.cell(n, OvalClass::Irregular).unwrap().word(), "no");
        }
        assert!(t.to_text().starts_with("n "));
    }

    #[test]
    fn n4_without_long_mode_is_inconclusive() {
        let t = long_column(&TableOptions::default(), &Exec::sequential()).unwrap();
        assert_eq!(t.cells[0].word(), "yes");
        assert_eq!(t.cells[1].word(), "yes");
        assert_eq!(t.cells[2], Cell::Inconclusive { reason: "long mode required".into() });
        let report = TableReport { columns: vec![t] };
        assert!(report.to_text().contains("inconclusive (long mode required)"));
    }
}
