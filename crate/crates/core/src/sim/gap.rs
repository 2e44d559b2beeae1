use core::fmt;

use super::trace::ClientRecord;
use crate::fabric::MacAddr;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GapReport {
    /// First arrival from the new source minus last arrival from the old
    /// one, in seconds. Negative when the two streams overlapped.
    pub gap: f64,
    /// Old-source packets that arrived after the first new-source packet.
    pub overlap_packets: usize,
    /// Largest spacing between consecutive client arrivals, in seconds.
    pub max_interpacket_delta: f64,
    pub last_old_us: u64,
    pub first_new_us: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct IncompleteMigration {
    pub saw_old: bool,
    pub saw_new: bool,
}

impl fmt::Display for IncompleteMigration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.saw_old, self.saw_new) {
            (true, false) => f.write_str("client never received a packet from the new transcoder"),
            (false, true) => f.write_str("client never received a packet from the old transcoder"),
            _ => f.write_str("client received nothing from either transcoder"),
        }
    }
}

impl core::error::Error for IncompleteMigration {}

/// Measures the switchover seen by the client. `log` must be in arrival order.
pub fn measure_gap(log: &[ClientRecord], old: MacAddr, new: MacAddr) -> Result<GapReport, IncompleteMigration> {
    let first_new = log.iter().find(|r| r.src_mac == new).map(|r| r.t_us);
    let last_old = log.iter().rev().find(|r| r.src_mac == old).map(|r| r.t_us);
    let (Some(first_new), Some(last_old)) = (first_new, last_old) else {
        return Err(IncompleteMigration {
            saw_old: last_old.is_some(),
            saw_new: first_new.is_some(),
        });
    };
    let overlap_packets = log.iter().filter(|r| r.src_mac == old && r.t_us > first_new).count();
    let max_delta = log.windows(2).map(|w| w[1].t_us - w[0].t_us).max().unwrap_or(0);
    Ok(GapReport {
        gap: (first_new as f64 - last_old as f64) / 1e6,
        overlap_packets,
        max_interpacket_delta: max_delta as f64 / 1e6,
        last_old_us: last_old,
        first_new_us: first_new,
    })
}
