use core::fmt;
use core::net::Ipv4Addr;
use core::str::FromStr;

/// 48-bit Ethernet address.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MacAddr(pub [u8; 6]);

impl MacAddr {
    pub const BROADCAST: MacAddr = MacAddr([0xff; 6]);

    pub fn is_broadcast(&self) -> bool {
        *self == Self::BROADCAST
    }
}

impl fmt::Display for MacAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.0;
        write!(f, "{:02x}:{:02x}:{:02x}:{:02x}:{:02x}:{:02x}", b[0], b[1], b[2], b[3], b[4], b[5])
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ParseMacError;

impl fmt::Display for ParseMacError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid MAC address")
    }
}

impl FromStr for MacAddr {
    type Err = ParseMacError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = [0u8; 6];
        let mut parts = s.split(':');
        for byte in &mut out {
            let p = parts.next().ok_or(ParseMacError)?;
            if p.len() != 2 {
                return Err(ParseMacError);
            }
            *byte = u8::from_str_radix(p, 16).map_err(|_| ParseMacError)?;
        }
        if parts.next().is_some() {
            return Err(ParseMacError);
        }
        Ok(MacAddr(out))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortId(pub u32);

impl fmt::Display for PortId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The two Ethernet types the migration deals with.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EthType {
    Ipv4,
    Arp,
}

impl EthType {
    pub fn code(self) -> u16 {
        match self {
            EthType::Ipv4 => 0x0800,
            EthType::Arp => 0x0806,
        }
    }

    pub fn from_code(code: u16) -> Option<Self> {
        match code {
            0x0800 => Some(EthType::Ipv4),
            0x0806 => Some(EthType::Arp),
            _ => None,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArpOp {
    Request,
    Reply,
}

/// Header fields the switches match on, plus a sequence number standing in
/// for the video payload. For ARP, `src_ip`/`dst_ip` are the sender and
/// target protocol addresses.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PacketHeader {
    pub in_port: PortId,
    pub eth_type: EthType,
    pub src_mac: MacAddr,
    pub dst_mac: MacAddr,
    pub src_ip: Ipv4Addr,
    pub dst_ip: Ipv4Addr,
    pub seq: u64,
    pub stream_id: u32,
    pub arp_op: Option<ArpOp>,
}

impl PacketHeader {
    pub fn ipv4(src_mac: MacAddr, dst_mac: MacAddr, src_ip: Ipv4Addr, dst_ip: Ipv4Addr, seq: u64) -> Self {
        Self {
            in_port: PortId(0),
            eth_type: EthType::Ipv4,
            src_mac,
            dst_mac,
            src_ip,
            dst_ip,
            seq,
            stream_id: 0,
            arp_op: None,
        }
    }

    pub fn arp(op: ArpOp, src_mac: MacAddr, dst_mac: MacAddr, src_ip: Ipv4Addr, dst_ip: Ipv4Addr) -> Self {
        Self {
            eth_type: EthType::Arp,
            arp_op: Some(op),
            ..Self::ipv4(src_mac, dst_mac, src_ip, dst_ip, 0)
        }
    }

    pub fn on_port(mut self, port: PortId) -> Self {
        self.in_port = port;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn mac_text_round_trip() {
        let m: MacAddr = "02:00:0a:ff:10:01".parse().unwrap();
        assert_eq!(m.0, [2, 0, 0x0a, 0xff, 0x10, 1]);
        assert_eq!(m.to_string(), "02:00:0a:ff:10:01");
        assert!("02:00:0a:ff:10".parse::<MacAddr>().is_err());
        assert!("02:00:0a:ff:10:01:00".parse::<MacAddr>().is_err());
        assert!("zz:00:0a:ff:10:01".parse::<MacAddr>().is_err());
    }

    #[test]
    fn eth_codes() {
        assert_eq!(EthType::from_code(0x0806), Some(EthType::Arp));
        assert_eq!(EthType::Ipv4.code(), 0x0800);
        assert_eq!(EthType::from_code(0x86dd), None);
    }
}
