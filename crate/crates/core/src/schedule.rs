//! The allocation grid and transmit-power matrix.
//!
//! A schedule is an F×T grid of VUE ids. Id 0 is the dummy VUE: the RB is
//! left empty. A real VUE may appear in several timeslots but at most once
//! per timeslot. The Boolean tensor `X[i][f][t]` is the expanded form of
//! the grid; both views are kept consistent.

use crate::error::{PowerError, ScheduleError};
use crate::mat::Mat2;
use alloc::vec;
use alloc::vec::Vec;

/// F×T grid of VUE ids (1-based; 0 = empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    n: usize,
    grid: Mat2<u16>,
}

impl Schedule {
    /// All-dummy grid.
    pub fn empty(n: usize, f: usize, t: usize) -> Self {
        Schedule {
            n,
            grid: Mat2::filled(f, t, 0),
        }
    }

    /// Validate and wrap a grid: ids in `0..=n`, no VUE twice in a timeslot.
    pub fn from_grid(n: usize, grid: Mat2<u16>) -> Result<Self, ScheduleError> {
        for t in 0..grid.cols() {
            let mut seen = vec![false; n + 1];
            for f in 0..grid.rows() {
                let id = grid[(f, t)];
                if id as usize > n {
                    return Err(ScheduleError::VueOutOfRange { id, n });
                }
                if id != 0 {
                    if seen[id as usize] {
                        return Err(ScheduleError::DuplicateInTimeslot { id, t });
                    }
                    seen[id as usize] = true;
                }
            }
        }
        Ok(Schedule { n, grid })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> usize {
        self.grid.rows()
    }

    pub fn t(&self) -> usize {
        self.grid.cols()
    }

    pub fn grid(&self) -> &Mat2<u16> {
        &self.grid
    }

    /// Place VUE `id` (1-based, 0 clears) in RB `(f, t)` without revalidating.
    /// Callers keep the one-RB-per-timeslot invariant themselves.
    pub(crate) fn set(&mut self, f: usize, t: usize, id: u16) {
        debug_assert!(id as usize <= self.n);
        self.grid[(f, t)] = id;
    }

    /// Whether VUE `i` (0-based) transmits in RB `(f, t)`.
    #[inline]
    pub fn is_scheduled(&self, i: usize, f: usize, t: usize) -> bool {
        self.grid[(f, t)] as usize == i + 1
    }

    /// Frequency slot used by VUE `i` (0-based) in timeslot `t`, if any.
    pub fn slot_of(&self, i: usize, t: usize) -> Option<usize> {
        (0..self.f()).find(|&f| self.is_scheduled(i, f, t))
    }

    /// Whether VUE `i` (0-based) transmits anywhere in timeslot `t`.
    pub fn transmits_in(&self, i: usize, t: usize) -> bool {
        self.slot_of(i, t).is_some()
    }

    /// Active `(vue 0-based, freq)` pairs of timeslot `t`, in frequency order.
    pub fn transmitters(&self, t: usize) -> Vec<(usize, usize)> {
        (0..self.f())
            .filter_map(|f| match self.grid[(f, t)] {
                0 => None,
                id => Some((id as usize - 1, f)),
            })
            .collect()
    }

    /// Timeslots in which VUE `i` (0-based) transmits.
    pub fn timeslots_of(&self, i: usize) -> Vec<usize> {
        (0..self.t()).filter(|&t| self.transmits_in(i, t)).collect()
    }

    /// VUEs (0-based) that appear anywhere in the grid.
    pub fn scheduled_vues(&self) -> Vec<usize> {
        let mut present = vec![false; self.n];
        for id in self.grid.iter() {
            if *id != 0 {
                present[*id as usize - 1] = true;
            }
        }
        (0..self.n).filter(|&i| present[i]).collect()
    }

    /// Number of occupied RBs.
    pub fn placements(&self) -> usize {
        self.grid.iter().filter(|&&id| id != 0).count()
    }

    /// Expand to the Boolean tensor form.
    pub fn to_x(&self) -> BoolTensor {
        u_to_x(self.n, &self.grid).expect("schedule invariants hold")
    }
}

/// N×F×T Boolean tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolTensor {
    n: usize,
    f: usize,
    t: usize,
    data: Vec<bool>,
}

impl BoolTensor {
    #[inline]
    pub fn get(&self, i: usize, f: usize, t: usize) -> bool {
        self.data[(i * self.f + f) * self.t + t]
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n, self.f, self.t)
    }
}

/// Expand a VUE-id grid into the Boolean tensor: `X[i][f][t]` is set exactly
/// when cell `(f, t)` holds id `i + 1`; dummy cells contribute nothing.
pub fn u_to_x(n: usize, grid: &Mat2<u16>) -> Result<BoolTensor, ScheduleError> {
    let (f, t) = (grid.rows(), grid.cols());
    let mut data = vec![false; n * f * t];
    for ff in 0..f {
        for tt in 0..t {
            let id = grid[(ff, tt)] as usize;
            if id > n {
                return Err(ScheduleError::VueOutOfRange { id: id as u16, n });
            }
            if id != 0 {
                data[((id - 1) * f + ff) * t + tt] = true;
            }
        }
    }
    Ok(BoolTensor { n, f, t, data })
}

/// N×T transmit powers, mW. Entries for unscheduled slots stay zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerMatrix {
    p: Mat2<f64>,
}

impl PowerMatrix {
    pub fn zeros(n: usize, t: usize) -> Self {
        PowerMatrix {
            p: Mat2::filled(n, t, 0.0),
        }
    }

    /// Uniform power for every VUE and timeslot.
    pub fn uniform(n: usize, t: usize, value_mw: f64) -> Result<Self, PowerError> {
        if !(value_mw >= 0.0 && value_mw.is_finite()) {
            return Err(PowerError::OutOfRange {
                value: value_mw,
                max: f64::INFINITY,
            });
        }
        Ok(PowerMatrix {
            p: Mat2::filled(n, t, value_mw),
        })
    }

    pub fn from_mat(p: Mat2<f64>) -> Self {
        PowerMatrix { p }
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn t(&self) -> usize {
        self.p.cols()
    }

    #[inline]
    pub fn get(&self, i: usize, t: usize) -> f64 {
        self.p[(i, t)]
    }

    pub fn set(&mut self, i: usize, t: usize, value_mw: f64) {
        self.p[(i, t)] = value_mw;
    }

    pub fn as_mat(&self) -> &Mat2<f64> {
        &self.p
    }

    /// Largest entry, mW.
    pub fn max_entry(&self) -> f64 {
        self.p.iter().fold(0.0f64, |acc, &v| acc.max(v))
    }

    /// Sum of all entries, mW.
    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }
}
