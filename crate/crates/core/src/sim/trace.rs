use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::net::Ipv4Addr;

use super::testbed::{FabricChange, Host, SwitchSel};
use crate::fabric::{Discard, EthType, MacAddr, PacketHeader, PortId};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Site {
    Switch(SwitchSel),
    Host(Host),
    Controller,
}

impl Site {
    pub fn name(self) -> &'static str {
        match self {
            Site::Switch(s) => s.name(),
            Site::Host(h) => h.name(),
            Site::Controller => "controller",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TranscoderState {
    Off,
    /// Powered on; `since` is the arrival of the first input packet.
    Buffering { since: Option<u64> },
    Streaming,
}

/// A switch's handling of one arrival, without the packet copies themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SwitchOutcome {
    IngressDisabled,
    RuleDrop { cookie: u64 },
    Filtered,
    Forwarded {
        cookie: Option<u64>,
        out: Vec<PortId>,
        discarded: Vec<(PortId, Discard)>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum IgnoreReason {
    Off,
    NotForUs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceKind {
    Stage(u8),
    Fabric(FabricChange),
    Transcoder(TranscoderState),
    PacketTx(PacketHeader),
    SwitchArrival { header: PacketHeader, outcome: SwitchOutcome },
    HostRx(PacketHeader),
    HostIgnored { header: PacketHeader, reason: IgnoreReason },
    /// The server had no valid ARP entry and did not send this sequence number.
    Unresolved { seq: u64 },
    ArpUpdate { mac: MacAddr, expires_at: u64 },
    /// The cached entry will lapse at `expires_at`, or was removed if `None`.
    ArpStale { expires_at: Option<u64> },
    /// Unrecoverable misconfiguration seen mid-run.
    Warning(&'static str),
}

impl TraceKind {
    pub fn name(&self) -> &'static str {
        match self {
            TraceKind::Stage(_) => "stage",
            TraceKind::Fabric(FabricChange::PortSet { .. }) => "port",
            TraceKind::Fabric(FabricChange::Installed { .. }) => "flow_install",
            TraceKind::Fabric(FabricChange::Deleted { .. }) => "flow_delete",
            TraceKind::Transcoder(_) => "transcoder",
            TraceKind::PacketTx(_) => "tx",
            TraceKind::SwitchArrival { .. } => "switch",
            TraceKind::HostRx(_) => "rx",
            TraceKind::HostIgnored { .. } => "ignored",
            TraceKind::Unresolved { .. } => "unresolved",
            TraceKind::ArpUpdate { .. } => "arp_update",
            TraceKind::ArpStale { .. } => "arp_stale",
            TraceKind::Warning(_) => "warning",
        }
    }
}

fn header_text(h: &PacketHeader) -> String {
    let kind = match h.eth_type {
        EthType::Ipv4 => "ip",
        EthType::Arp => "arp",
    };
    format!(
        "{kind} in={} {}>{} {}>{} seq={}",
        h.in_port, h.src_mac, h.dst_mac, h.src_ip, h.dst_ip, h.seq
    )
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceKind::Stage(n) => write!(f, "stage {n}"),
            TraceKind::Fabric(FabricChange::PortSet { port, enabled, .. }) => {
                write!(f, "port {port} {}", if *enabled { "up" } else { "down" })
            }
            TraceKind::Fabric(FabricChange::Installed { flow, cookie, replaced, .. }) => {
                write!(f, "flow {flow} cookie={cookie}{}", if *replaced { " replaced" } else { "" })
            }
            TraceKind::Fabric(FabricChange::Deleted { flow, cookie, removed, .. }) => {
                write!(f, "flow {flow} cookie={cookie} removed={removed}")
            }
            TraceKind::Transcoder(s) => write!(f, "{s:?}"),
            TraceKind::PacketTx(h) | TraceKind::HostRx(h) => f.write_str(&header_text(h)),
            TraceKind::SwitchArrival { header, outcome } => {
                write!(f, "{} -> ", header_text(header))?;
                match outcome {
                    SwitchOutcome::IngressDisabled => f.write_str("ingress disabled"),
                    SwitchOutcome::RuleDrop { cookie } => write!(f, "drop cookie={cookie}"),
                    SwitchOutcome::Filtered => f.write_str("filtered"),
                    SwitchOutcome::Forwarded { cookie, out, discarded } => {
                        match cookie {
                            Some(c) => write!(f, "cookie={c}")?,
                            None => f.write_str("default")?,
                        }
                        for p in out {
                            write!(f, " out:{p}")?;
                        }
                        for (p, why) in discarded {
                            write!(f, " discard:{p}:{why:?}")?;
                        }
                        Ok(())
                    }
                }
            }
            TraceKind::HostIgnored { header, reason } => write!(f, "{} ({reason:?})", header_text(header)),
            TraceKind::Unresolved { seq } => write!(f, "seq={seq}"),
            TraceKind::ArpUpdate { mac, expires_at } => write!(f, "{mac} until {expires_at}"),
            TraceKind::ArpStale { expires_at: Some(t) } => write!(f, "expires {t}"),
            TraceKind::ArpStale { expires_at: None } => f.write_str("flushed"),
            TraceKind::Warning(w) => f.write_str(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub t_us: u64,
    pub site: Site,
    pub kind: TraceKind,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ClientRecord {
    pub t_us: u64,
    pub src_mac: MacAddr,
    pub seq: u64,
}

/// Copy-level accounting of the server's video packets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VideoAudit {
    pub sent: usize,
    /// Extra copies made by switches (one arrival emitting k copies adds k).
    pub emitted: usize,
    pub switch_arrivals: usize,
    pub delivered: usize,
    pub ignored: usize,
    pub rule_dropped: usize,
    pub ingress_discarded: usize,
    pub egress_discarded: usize,
    pub filtered: usize,
    pub in_flight: usize,
}

impl VideoAudit {
    /// Every copy put on a wire arrived somewhere or is still travelling.
    pub fn balanced(&self) -> bool {
        self.sent + self.emitted == self.switch_arrivals + self.delivered + self.ignored + self.in_flight
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
    pub client_log: Vec<ClientRecord>,
    /// Server video copies still queued when the run ended.
    pub in_flight_at_end: usize,
}

impl Trace {
    pub(crate) fn push(&mut self, t_us: u64, site: Site, kind: TraceKind) {
        self.events.push(TraceEvent { t_us, site, kind });
    }

    pub fn audit_video(&self, server_ip: Ipv4Addr) -> VideoAudit {
        let video = |h: &PacketHeader| h.eth_type == EthType::Ipv4 && h.src_ip == server_ip;
        let mut a = VideoAudit {
            in_flight: self.in_flight_at_end,
            ..VideoAudit::default()
        };
        for e in &self.events {
            match &e.kind {
                TraceKind::PacketTx(h) if video(h) && e.site == Site::Host(Host::Server) => a.sent += 1,
                TraceKind::SwitchArrival { header, outcome } if video(header) => {
                    a.switch_arrivals += 1;
                    match outcome {
                        SwitchOutcome::IngressDisabled => a.ingress_discarded += 1,
                        SwitchOutcome::RuleDrop { .. } => a.rule_dropped += 1,
                        SwitchOutcome::Filtered => a.filtered += 1,
                        SwitchOutcome::Forwarded { out, discarded, .. } => {
                            a.emitted += out.len();
                            a.egress_discarded += discarded.len();
                        }
                    }
                }
                TraceKind::HostRx(h) if video(h) => a.delivered += 1,
                TraceKind::HostIgnored { header, .. } if video(header) => a.ignored += 1,
                _ => {}
            }
        }
        a
    }

    pub fn stage_time(&self, stage: u8) -> Option<u64> {
        self.events.iter().find(|e| e.kind == TraceKind::Stage(stage)).map(|e| e.t_us)
    }
}
