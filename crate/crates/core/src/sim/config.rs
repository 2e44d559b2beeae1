use core::fmt;

/// Timing model of one migration run. Durations are in seconds.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    /// Round trip of the inter-switch link; each direction takes half.
    pub link_rtt: f64,
    /// One-way latency between a host and its switch port.
    pub host_latency: f64,
    /// Video packets per second sent by the server.
    pub packet_rate: f64,
    pub arp_timeout: f64,
    /// Period of the server's unicast ARP refresh probe.
    pub arp_refresh: f64,
    /// Spacing of broadcast ARP requests while unresolved.
    pub arp_retry: f64,
    pub wait1: f64,
    pub wait2: f64,
    pub transcoder_startup: f64,
    pub sim_duration: f64,
    pub migration_start: f64,
    /// Fixes the stale ARP entry's remaining lifetime at the cutover instead
    /// of drawing it uniformly from `[0, arp_timeout)`.
    pub arp_residual: Option<f64>,
    pub overlap_threshold: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            link_rtt: 0.125,
            host_latency: 0.0001,
            packet_rate: 100.0,
            arp_timeout: 30.0,
            arp_refresh: 2.0,
            arp_retry: 1.0,
            wait1: 1.0,
            wait2: 5.0,
            transcoder_startup: 2.8,
            sim_duration: 60.0,
            migration_start: 5.0,
            arp_residual: None,
            overlap_threshold: 20,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub field: &'static str,
    pub value: f64,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid simulation parameter {} = {}", self.field, self.value)
    }
}

impl core::error::Error for ConfigError {}

pub(crate) fn ticks(seconds: f64) -> u64 {
    (seconds * 1e6 + 0.5) as u64
}

impl SimConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rtt(mut self, rtt: f64) -> Self {
        self.link_rtt = rtt;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let check = |field: &'static str, value: f64, allow_zero: bool| {
            let ok = value.is_finite() && (value > 0.0 || (allow_zero && value == 0.0));
            if ok { Ok(()) } else { Err(ConfigError { field, value }) }
        };
        check("link_rtt", self.link_rtt, true)?;
        check("host_latency", self.host_latency, true)?;
        check("packet_rate", self.packet_rate, false)?;
        check("arp_timeout", self.arp_timeout, false)?;
        check("arp_refresh", self.arp_refresh, false)?;
        check("arp_retry", self.arp_retry, false)?;
        check("wait1", self.wait1, false)?;
        check("wait2", self.wait2, false)?;
        check("transcoder_startup", self.transcoder_startup, true)?;
        check("sim_duration", self.sim_duration, false)?;
        check("migration_start", self.migration_start, false)?;
        if let Some(r) = self.arp_residual {
            check("arp_residual", r, true)?;
        }
        if ticks(1.0 / self.packet_rate) == 0 {
            return Err(ConfigError { field: "packet_rate", value: self.packet_rate });
        }
        Ok(())
    }

    /// The old transcoder is cut off before the new one has finished buffering.
    pub fn unsafe_switchover(&self) -> bool {
        self.wait2 < self.transcoder_startup
    }
}

/// The four migration procedures compared.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MigrationKind {
    Of,
    Standard,
    ArpFlushOf,
    ArpFlushStandard,
}

impl MigrationKind {
    pub const ALL: [MigrationKind; 4] = [Self::Of, Self::Standard, Self::ArpFlushOf, Self::ArpFlushStandard];

    pub fn name(self) -> &'static str {
        match self {
            Self::Of => "of",
            Self::Standard => "standard",
            Self::ArpFlushOf => "arp-flush-of",
            Self::ArpFlushStandard => "arp-flush-standard",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn uses_flows(self) -> bool {
        matches!(self, Self::Of | Self::ArpFlushOf)
    }

    pub fn flushes_arp(self) -> bool {
        matches!(self, Self::ArpFlushOf | Self::ArpFlushStandard)
    }
}

impl fmt::Display for MigrationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
