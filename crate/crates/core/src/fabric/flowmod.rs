//! Text form of flow-mods, in the `ovs-ofctl` style:
//!
//! ```text
//! cookie=9998,in_port=1,dl_type=0x0800,nw_src=10.0.0.1 actions=output:10,mod_dl_dst:02:00:00:00:00:11,output:2
//! del-flows sw2 cookie=9997/-1
//! ```
//!
//! Values may be symbolic names resolved through [`Bindings`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::net::Ipv4Addr;

use super::table::{Action, FlowMatch, FlowRule};
use super::{EthType, MacAddr, PortId};

/// Priority given to rules whose text omits one; sits above the default path.
pub const MIGRATION_PRIORITY: u16 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowModError {
    /// 1-based line in a flow-mod file, when known.
    pub line: Option<usize>,
    pub message: String,
}

impl FlowModError {
    fn new(message: impl Into<String>) -> Self {
        Self { line: None, message: message.into() }
    }

    fn at(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for FlowModError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl core::error::Error for FlowModError {}

/// Symbol table for names such as `serverPORT` or `transcoder1MAC`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings(BTreeMap<String, String>);

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, value: impl ToString) -> &mut Self {
        self.0.insert(name.into(), value.to_string());
        self
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0.get(name).map(String::as_str)
    }

    fn resolve<'a>(&'a self, token: &'a str) -> &'a str {
        self.get(token).unwrap_or(token)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowMod {
    Add { switch: String, rule: FlowRule },
    Delete { switch: String, cookie: u64, mask: u64 },
}

impl FlowMod {
    pub fn switch(&self) -> &str {
        match self {
            FlowMod::Add { switch, .. } | FlowMod::Delete { switch, .. } => switch,
        }
    }
}

/// A flow-mod tagged with its row number in the migration listing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberedMod {
    pub flow: u32,
    pub flow_mod: FlowMod,
}

fn parse_uint(s: &str) -> Option<u64> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}

fn bad(field: &str, value: &str) -> FlowModError {
    FlowModError::new(format!("bad value `{value}` for `{field}`"))
}

fn parse_port(field: &str, v: &str) -> Result<PortId, FlowModError> {
    parse_uint(v)
        .and_then(|n| u32::try_from(n).ok())
        .map(PortId)
        .ok_or_else(|| bad(field, v))
}

fn parse_action(tok: &str, b: &Bindings) -> Result<Action, FlowModError> {
    if tok == "drop" {
        return Ok(Action::Drop);
    }
    let (name, arg) = tok
        .split_once(':')
        .ok_or_else(|| FlowModError::new(format!("unknown action `{tok}`")))?;
    let arg = b.resolve(arg);
    match name {
        "output" => Ok(Action::Output(parse_port("output", arg)?)),
        "mod_dl_dst" => Ok(Action::ModDstMac(arg.parse().map_err(|_| bad("mod_dl_dst", arg))?)),
        _ => Err(FlowModError::new(format!("unknown action `{name}`"))),
    }
}

fn set_once<T>(slot: &mut Option<T>, field: &str, value: T) -> Result<(), FlowModError> {
    if slot.is_some() {
        return Err(FlowModError::new(format!("field `{field}` given twice")));
    }
    *slot = Some(value);
    Ok(())
}

/// Parses `<match fields> actions=<list>`.
pub fn parse_rule(text: &str, b: &Bindings) -> Result<FlowRule, FlowModError> {
    let (fields, actions) = text
        .split_once("actions=")
        .ok_or_else(|| FlowModError::new("missing `actions=`"))?;

    let mut cookie = None;
    let mut priority = None;
    let mut m = FlowMatch::default();
    for field in fields.trim().trim_end_matches(',').split(',').map(str::trim).filter(|f| !f.is_empty()) {
        let (key, raw) = field
            .split_once('=')
            .ok_or_else(|| FlowModError::new(format!("expected key=value, got `{field}`")))?;
        let v = b.resolve(raw);
        match key {
            "cookie" => set_once(&mut cookie, key, parse_uint(v).ok_or_else(|| bad(key, v))?)?,
            "priority" => set_once(
                &mut priority,
                key,
                parse_uint(v).and_then(|p| u16::try_from(p).ok()).ok_or_else(|| bad(key, v))?,
            )?,
            "in_port" => set_once(&mut m.in_port, key, parse_port(key, v)?)?,
            "dl_type" => set_once(
                &mut m.eth_type,
                key,
                parse_uint(v)
                    .and_then(|c| u16::try_from(c).ok())
                    .and_then(EthType::from_code)
                    .ok_or_else(|| bad(key, v))?,
            )?,
            "dl_src" => set_once(&mut m.src_mac, key, v.parse::<MacAddr>().map_err(|_| bad(key, v))?)?,
            "dl_dst" => set_once(&mut m.dst_mac, key, v.parse::<MacAddr>().map_err(|_| bad(key, v))?)?,
            "nw_src" => set_once(&mut m.src_ip, key, v.parse::<Ipv4Addr>().map_err(|_| bad(key, v))?)?,
            "nw_dst" => set_once(&mut m.dst_ip, key, v.parse::<Ipv4Addr>().map_err(|_| bad(key, v))?)?,
            _ => return Err(FlowModError::new(format!("unknown field `{key}`"))),
        }
    }

    let actions = actions
        .trim()
        .split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(|a| parse_action(a, b))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(FlowRule {
        cookie: cookie.unwrap_or(0),
        priority: priority.unwrap_or(MIGRATION_PRIORITY),
        matcher: m,
        actions,
    })
}

/// Prints a rule with literal values. `parse_rule` reads it back unchanged.
pub fn print_rule(rule: &FlowRule) -> String {
    let mut parts: Vec<String> = Vec::new();
    parts.push(format!("cookie={}", rule.cookie));
    parts.push(format!("priority={}", rule.priority));
    let m = &rule.matcher;
    if let Some(p) = m.in_port {
        parts.push(format!("in_port={p}"));
    }
    if let Some(t) = m.eth_type {
        parts.push(format!("dl_type=0x{:04x}", t.code()));
    }
    if let Some(mac) = m.src_mac {
        parts.push(format!("dl_src={mac}"));
    }
    if let Some(mac) = m.dst_mac {
        parts.push(format!("dl_dst={mac}"));
    }
    if let Some(ip) = m.src_ip {
        parts.push(format!("nw_src={ip}"));
    }
    if let Some(ip) = m.dst_ip {
        parts.push(format!("nw_dst={ip}"));
    }
    let actions: Vec<String> = rule
        .actions
        .iter()
        .map(|a| match a {
            Action::Output(p) => format!("output:{p}"),
            Action::ModDstMac(mac) => format!("mod_dl_dst:{mac}"),
            Action::Drop => "drop".into(),
        })
        .collect();
    format!("{} actions={}", parts.join(","), actions.join(","))
}

fn parse_delete(switch: &str, spec: &str, b: &Bindings) -> Result<FlowMod, FlowModError> {
    let value = spec
        .trim()
        .strip_prefix("cookie=")
        .ok_or_else(|| FlowModError::new("del-flows expects cookie=<value>/<mask>"))?;
    let (c, mask) = value.split_once('/').unwrap_or((value, "-1"));
    let c = b.resolve(c);
    let mask = b.resolve(mask);
    let cookie = parse_uint(c).ok_or_else(|| bad("cookie", c))?;
    let mask = if mask == "-1" { u64::MAX } else { parse_uint(mask).ok_or_else(|| bad("mask", mask))? };
    Ok(FlowMod::Delete {
        switch: b.resolve(switch).into(),
        cookie,
        mask,
    })
}

/// Parses one `add-flow <switch> <rule>` or `del-flows <switch> cookie=<c>/<mask>` command.
pub fn parse_flow_mod(text: &str, b: &Bindings) -> Result<FlowMod, FlowModError> {
    let text = text.trim();
    let (verb, rest) = text.split_once(char::is_whitespace).ok_or_else(|| FlowModError::new("empty flow-mod"))?;
    let (switch, body) = rest
        .trim_start()
        .split_once(char::is_whitespace)
        .ok_or_else(|| FlowModError::new("missing switch name"))?;
    match verb {
        "add-flow" => Ok(FlowMod::Add {
            switch: b.resolve(switch).into(),
            rule: parse_rule(body, b)?,
        }),
        "del-flows" => parse_delete(switch, body, b),
        _ => Err(FlowModError::new(format!("unknown command `{verb}`"))),
    }
}

pub fn print_flow_mod(m: &FlowMod) -> String {
    match m {
        FlowMod::Add { switch, rule } => format!("add-flow {switch} {}", print_rule(rule)),
        FlowMod::Delete { switch, cookie, mask } => {
            let mask = if *mask == u64::MAX { "-1".into() } else { mask.to_string() };
            format!("del-flows {switch} cookie={cookie}/{mask}")
        }
    }
}

/// Parses a listing of numbered flow-mods, one per line: `<n> <command>`.
/// Blank lines and `#` comments are skipped.
pub fn parse_flow_mods(text: &str, b: &Bindings) -> Result<Vec<NumberedMod>, FlowModError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (num, cmd) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| FlowModError::new("expected `<flow number> <command>`").at(i + 1))?;
        let flow = num
            .parse()
            .map_err(|_| FlowModError::new(format!("bad flow number `{num}`")).at(i + 1))?;
        let flow_mod = parse_flow_mod(cmd, b).map_err(|e| e.at(i + 1))?;
        out.push(NumberedMod { flow, flow_mod });
    }
    Ok(out)
}
