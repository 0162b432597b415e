use std::io::Write;

use serde::Serialize;

use super::{FailPolicy, Mode, RoundKind, RoundRecord};
use crate::bounds::SecurityVerdict;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decoded {
    pub bits: Vec<u8>,
    /// Message positions lost to Bell-analysis failures.
    pub dropped: Vec<usize>,
}

fn message_rounds(records: &[RoundRecord]) -> impl Iterator<Item = &RoundRecord> {
    records.iter().filter(|r| r.message_index.is_some())
}

/// Public XOR stream of the message rounds, fails skipped.
pub fn ciphertext(records: &[RoundRecord]) -> Vec<u8> {
    message_rounds(records)
        .filter_map(|r| r.bell_outcome.and_then(|b| b.xor()))
        .map(u8::from)
        .collect()
}

/// Recover the message carried by a deterministic session.
///
/// Refused unless the verdict is secure: nothing is disclosed on an insecure channel.
pub fn decode(records: &[RoundRecord], mode: Mode, verdict: &SecurityVerdict) -> Result<Decoded> {
    if mode == Mode::RandomKey {
        return Err(Error::Config("decode applies only to deterministic modes".into()));
    }
    if !verdict.secure {
        return Err(Error::Aborted(verdict.reason.clone()));
    }
    let mut out = Decoded {
        bits: Vec::new(),
        dropped: Vec::new(),
    };
    for r in message_rounds(records) {
        let index = r.message_index.expect("filtered");
        let Some(xor) = r.bell_outcome.and_then(|b| b.xor()) else {
            out.dropped.push(index);
            continue;
        };
        let own = match mode {
            Mode::BobToAlice => r.alice_bit,
            _ => r.bob_bit.expect("encode round has a Bob bit"),
        };
        out.bits.push(u8::from(xor) ^ own);
    }
    Ok(out)
}

/// Error rate on sacrificed encode rounds: Alice's inferred bit against Bob's.
pub fn estimate_qber(records: &[RoundRecord], policy: FailPolicy) -> Result<f64> {
    let (mut errors, mut total) = (0usize, 0usize);
    for r in records.iter().filter(|r| r.sacrificed) {
        let bob = r.bob_bit.expect("encode round has a Bob bit");
        match r.bell_outcome.and_then(|b| b.xor()) {
            Some(xor) => {
                total += 1;
                if (u8::from(xor) ^ r.alice_bit) != bob {
                    errors += 1;
                }
            }
            None => {
                if policy == FailPolicy::CountAsError {
                    total += 1;
                    errors += 1;
                }
            }
        }
    }
    if total == 0 {
        return Err(Error::NoComparableRounds);
    }
    Ok(errors as f64 / total as f64)
}

pub fn write_trace_csv<W: Write>(records: &[RoundRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "index,kind,alice_bit,bob_bit,check_outcome,bell_outcome")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.index,
            r.kind.as_str(),
            r.alice_bit,
            r.bob_bit.map(|b| b.to_string()).unwrap_or_default(),
            r.check_outcome.map(|c| c.as_str()).unwrap_or(""),
            r.bell_outcome.map(|b| b.as_str()).unwrap_or(""),
        )?;
    }
    Ok(())
}

impl RoundRecord {
    pub fn is_check(&self) -> bool {
        self.kind == RoundKind::Check
    }
}
