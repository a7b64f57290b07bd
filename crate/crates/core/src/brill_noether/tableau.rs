//! Rectangular standard tableaux and their Dyck paths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rectangular filling of `rows × cols` cells by `1..=rows·cols`.
/// Rows are indexed from 0 at the top, columns from 0 at the left.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    /// Checks rectangularity, the bijection onto `1..=g` and standardness.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Precondition("tableau is not rectangular".into()));
        }
        let g = rows.len() * cols;
        let mut seen = vec![false; g + 1];
        for &x in rows.iter().flatten() {
            if x == 0 || x > g || seen[x] {
                return Err(Error::Precondition(format!("entries must be 1..={g} exactly once")));
            }
            seen[x] = true;
        }
        for (a, row) in rows.iter().enumerate() {
            for (b, &x) in row.iter().enumerate() {
                let right = row.get(b + 1).is_none_or(|&y| x < y);
                let below = rows.get(a + 1).is_none_or(|next| x < next[b]);
                if !right || !below {
                    return Err(Error::Precondition(format!(
                        "tableau is not standard at row {a}, column {b}"
                    )));
                }
            }
        }
        Ok(Tableau { rows })
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn size(&self) -> usize {
        self.row_count() * self.col_count()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.rows[row][col]
    }

    /// (row, column) of entry `i`.
    pub fn position(&self, i: usize) -> Option<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .find_map(|(a, row)| row.iter().position(|&x| x == i).map(|b| (a, b)))
    }

    pub fn column_of(&self, i: usize) -> Option<usize> {
        self.position(i).map(|(_, c)| c)
    }

    pub fn row_of(&self, i: usize) -> Option<usize> {
        self.position(i).map(|(r, _)| r)
    }

    pub fn transpose(&self) -> Tableau {
        let rows = (0..self.col_count())
            .map(|c| self.rows.iter().map(|row| row[c]).collect())
            .collect();
        Tableau { rows }
    }

    /// The column of each entry `1..=g`, in entry order.
    pub fn column_word(&self) -> Vec<usize> {
        let mut word = vec![0; self.size()];
        for row in &self.rows {
            for (c, &x) in row.iter().enumerate() {
                word[x - 1] = c;
            }
        }
        word
    }
}

impl TryFrom<Vec<Vec<usize>>> for Tableau {
    type Error = Error;
    fn try_from(rows: Vec<Vec<usize>>) -> Result<Self> {
        Tableau::new(rows)
    }
}

impl From<Tableau> for Vec<Vec<usize>> {
    fn from(t: Tableau) -> Self {
        t.rows
    }
}

/// All standard tableaux of the given rectangular shape.
///
/// Entries are placed in increasing order, trying rows top to bottom, which
/// fixes the output order.
pub fn enumerate_tableaux(rows: usize, cols: usize) -> Vec<Tableau> {
    fn go(i: usize, g: usize, cols: usize, fill: &mut Vec<Vec<usize>>, out: &mut Vec<Tableau>) {
        if i > g {
            out.push(Tableau { rows: fill.clone() });
            return;
        }
        for r in 0..fill.len() {
            let len = fill[r].len();
            if len < cols && (r == 0 || fill[r - 1].len() > len) {
                fill[r].push(i);
                go(i + 1, g, cols, fill, out);
                fill[r].pop();
            }
        }
    }
    let mut out = Vec::new();
    if rows == 0 || cols == 0 {
        return out;
    }
    let mut fill = vec![Vec::new(); rows];
    go(1, rows * cols, cols, &mut fill, &mut out);
    out
}

/// Lattice points `p_0, …, p_g` in `Z^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyckPath {
    points: Vec<Vec<i64>>,
}

impl DyckPath {
    /// Builds the path from the column of each entry; `r + 1` columns.
    ///
    /// Fails unless every point lies in the open chamber
    /// `x_0 > … > x_{r-1} > 0` and the path closes up.
    pub fn from_column_word(word: &[usize], r: usize) -> Result<Self> {
        let start: Vec<i64> = (1..=r as i64).rev().collect();
        let mut points = vec![start.clone()];
        for (k, &c) in word.iter().enumerate() {
            let mut p = points.last().expect("nonempty").clone();
            if c > r {
                return Err(Error::Precondition(format!("entry {} in column {c} > {r}", k + 1)));
            }
            if c < r {
                p[c] += 1;
            } else {
                p.iter_mut().for_each(|x| *x -= 1);
            }
            if !in_chamber(&p) {
                return Err(Error::Precondition(format!(
                    "path leaves the chamber at step {}",
                    k + 1
                )));
            }
            points.push(p);
        }
        if points.last() != Some(&start) {
            return Err(Error::Precondition("path does not return to its start".into()));
        }
        Ok(DyckPath { points })
    }

    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.points[i]
    }

    /// `p_i(j)`.
    pub fn coord(&self, i: usize, j: usize) -> i64 {
        self.points[i][j]
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }
}

fn in_chamber(p: &[i64]) -> bool {
    p.windows(2).all(|w| w[0] > w[1]) && p.last().is_none_or(|&x| x > 0)
}

pub fn tableau_to_dyck(t: &Tableau) -> Result<DyckPath> {
    let r = t
        .col_count()
        .checked_sub(1)
        .ok_or_else(|| Error::Precondition("empty tableau".into()))?;
    DyckPath::from_column_word(&t.column_word(), r)
}
