//! Operator programs: sequences of `ẽ_i`, `f̃_i`, `ẽ*_i`, `f̃*_i` with counts,
//! applied left to right to a cellular crystal element.

use alloc::vec::Vec;

use thiserror::Error;

use crate::cellular::{CellVec, CellularCrystal};
use crate::crystal::{Crystal, CrystalValue};
use crate::subcrystal::{StarOps, SubcrystalError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    E,
    F,
    EStar,
    FStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Times(u32),
    /// `ε_i(x)` times; only meaningful for [`Op::E`].
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instr {
    pub op: Op,
    pub i: usize,
    pub count: Count,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("index {0} does not occur in the word")]
    Absent(usize),
    #[error("count \"max\" is only allowed for e")]
    MaxNotAllowed,
    #[error("star operators unavailable for index {0}")]
    StarNotAvailable(usize),
    #[error(transparent)]
    Subcrystal(SubcrystalError),
}

impl From<SubcrystalError> for ProgramError {
    fn from(e: SubcrystalError) -> Self {
        match e {
            SubcrystalError::StarNotAvailable(i) => ProgramError::StarNotAvailable(i),
            e => ProgramError::Subcrystal(e),
        }
    }
}

/// One applied operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub op: Op,
    pub i: usize,
    /// The coordinate moved: `m̃ᶠ_i`/`m̃ᵉ_i` for plain operators, the last
    /// coordinate of the transported word for star operators.
    pub position: Option<usize>,
    /// `σ̃_i` (or `ε*_i`) before the step.
    pub sigma: CrystalValue,
    pub result: CellVec,
}

/// Runs `program` on `x`. Star operators are computed through `star`, which
/// is created on demand over `crystal`.
pub fn apply_program(
    crystal: &CellularCrystal,
    star: &mut Option<StarOps>,
    x: &CellVec,
    program: &[Instr],
) -> Result<(CellVec, Vec<TraceStep>), ProgramError> {
    crystal
        .check_len(x)
        .map_err(|e| ProgramError::Subcrystal(e.into()))?;
    let mut cur = x.clone();
    let mut trace = Vec::new();
    for instr in program {
        let i = instr.i;
        let times = match (instr.count, instr.op) {
            (Count::Times(k), _) => k as i64,
            (Count::Max, Op::E) => match crystal.eps(i, &cur) {
                CrystalValue::Finite(k) if k >= 0 => k,
                CrystalValue::Finite(_) => 0,
                CrystalValue::NegInf => return Err(ProgramError::Absent(i)),
            },
            (Count::Max, _) => return Err(ProgramError::MaxNotAllowed),
        };
        if times == 0 {
            trace.push(TraceStep {
                op: instr.op,
                i,
                position: None,
                sigma: crystal.sigma_tilde(&cur, i),
                result: cur.clone(),
            });
            continue;
        }
        for _ in 0..times {
            let step = match instr.op {
                Op::E | Op::F => {
                    let sigma = crystal.sigma_tilde(&cur, i);
                    let (position, next) = if instr.op == Op::E {
                        (crystal.m_e(&cur, i), crystal.e_op(i, &cur))
                    } else {
                        (crystal.m_f(&cur, i), crystal.f_op(i, &cur))
                    };
                    let next = next.ok_or(ProgramError::Absent(i))?;
                    TraceStep { op: instr.op, i, position, sigma, result: next }
                }
                Op::EStar | Op::FStar => {
                    let ops = star.get_or_insert_with(|| StarOps::new(crystal.clone()));
                    let sigma = CrystalValue::Finite(ops.eps_star(&cur, i)?);
                    let next = if instr.op == Op::EStar {
                        ops.e_star(i, &cur)?
                    } else {
                        ops.f_star(i, &cur)?
                    };
                    TraceStep {
                        op: instr.op,
                        i,
                        position: Some(crystal.len() - 1),
                        sigma,
                        result: next,
                    }
                }
            };
            cur = step.result.clone();
            trace.push(step);
        }
    }
    Ok((cur, trace))
}
