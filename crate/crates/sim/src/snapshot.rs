//! Binary pattern-set snapshots.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes  "BEGPSET\0"
//! version  u32      1
//! n        u64
//! m        u64
//! p        u64      IEEE-754 bits
//! seed     u64      master seed
//! entries  u64      total active entries
//! offsets  (m + 1) × u64
//! rows     entries × (u32 neuron, i8 spin)
//! ```

use std::io::{Read, Write};

use beg_core::{Entry, PatternSet};

use crate::error::{Result, SimError};

pub const MAGIC: [u8; 8] = *b"BEGPSET\0";
pub const VERSION: u32 = 1;

fn io_err(e: std::io::Error) -> SimError {
    SimError::Snapshot(e.to_string())
}

pub fn write_snapshot<W: Write>(ps: &PatternSet, mut w: W) -> Result<()> {
    let total = ps.total_active() as u64;
    let mut buf = Vec::with_capacity(52 + 8 * (ps.m() + 1) + 5 * total as usize);
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    for v in [
        ps.n() as u64,
        ps.m() as u64,
        ps.p().to_bits(),
        ps.master_seed(),
        total,
    ] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let mut offset = 0u64;
    buf.extend_from_slice(&offset.to_le_bytes());
    for mu in 0..ps.m() {
        offset += ps.pattern_entries(mu).len() as u64;
        buf.extend_from_slice(&offset.to_le_bytes());
    }
    for mu in 0..ps.m() {
        for e in ps.pattern_entries(mu) {
            buf.extend_from_slice(&e.index.to_le_bytes());
            buf.push(e.spin as u8);
        }
    }
    w.write_all(&buf).map_err(io_err)
}

struct Cursor<'a>(&'a [u8]);

impl Cursor<'_> {
    fn take<const K: usize>(&mut self) -> Result<[u8; K]> {
        if self.0.len() < K {
            return Err(SimError::Snapshot("truncated".into()));
        }
        let (head, rest) = self.0.split_at(K);
        self.0 = rest;
        Ok(head.try_into().expect("length checked"))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }

    fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| SimError::Snapshot("size overflows usize".into()))
    }
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<PatternSet> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(io_err)?;
    let mut c = Cursor(&bytes);
    if c.take::<8>()? != MAGIC {
        return Err(SimError::Snapshot("bad magic".into()));
    }
    let version = u32::from_le_bytes(c.take()?);
    if version != VERSION {
        return Err(SimError::Snapshot(format!("unsupported version {version}")));
    }
    let n = c.usize()?;
    let m = c.usize()?;
    let p = f64::from_bits(c.u64()?);
    let seed = c.u64()?;
    let total = c.usize()?;
    let expected = m
        .checked_add(1)
        .and_then(|k| k.checked_mul(8))
        .and_then(|o| total.checked_mul(5).and_then(|e| o.checked_add(e)));
    if expected != Some(c.0.len()) {
        return Err(SimError::Snapshot(
            "payload length does not match header".into(),
        ));
    }
    let offsets = (0..=m).map(|_| c.usize()).collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::with_capacity(total);
    for _ in 0..total {
        let index = u32::from_le_bytes(c.take()?);
        let [spin] = c.take::<1>()?;
        entries.push(Entry::new(index, spin as i8));
    }
    Ok(PatternSet::from_csr(n, p, seed, offsets, entries)?)
}
