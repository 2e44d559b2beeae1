use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Index;

use super::{ModelError, NetworkGraph, NodeId};

/// A codec and the bitrate (Mb/s) a stream encoded with it consumes.
#[derive(Clone, Debug, PartialEq)]
pub struct CodecRate {
    pub label: String,
    pub bitrate: f64,
}

impl CodecRate {
    pub fn new(label: impl Into<String>, bitrate: f64) -> Self {
        Self {
            label: label.into(),
            bitrate,
        }
    }
}

/// Checks a scenario's codec set: positive bitrates, unique labels.
pub fn validate_codecs(codecs: &[CodecRate]) -> Result<(), ModelError> {
    let mut seen = BTreeSet::new();
    for c in codecs {
        if !(c.bitrate > 0.0) || !c.bitrate.is_finite() {
            return Err(ModelError::InvalidBitrate(c.label.clone()));
        }
        if !seen.insert(c.label.as_str()) {
            return Err(ModelError::DuplicateCodec(c.label.clone()));
        }
    }
    Ok(())
}

/// One client's request for a piece of content at a given codec rate.
#[derive(Clone, Debug, PartialEq)]
pub struct Demand {
    pub source: NodeId,
    pub destination: NodeId,
    pub rate: CodecRate,
    /// Demands with the same source and content can share one trunk stream.
    pub content: String,
}

impl Demand {
    pub fn new(source: NodeId, destination: NodeId, rate: CodecRate, content: impl Into<String>) -> Self {
        Self {
            source,
            destination,
            rate,
            content: content.into(),
        }
    }

    pub fn bitrate(&self) -> f64 {
        self.rate.bitrate
    }
}

/// Ordered demand list validated against a graph's role sets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DemandSet {
    demands: Vec<Demand>,
}

impl DemandSet {
    pub fn new(graph: &NetworkGraph, demands: Vec<Demand>) -> Result<Self, ModelError> {
        for (i, d) in demands.iter().enumerate() {
            let src = graph.roles(d.source).ok_or(ModelError::UnknownNode(d.source))?;
            let dst = graph.roles(d.destination).ok_or(ModelError::UnknownNode(d.destination))?;
            if !src.source {
                return Err(ModelError::NotASource { demand: i, node: d.source });
            }
            if !dst.client {
                return Err(ModelError::NotAClient { demand: i, node: d.destination });
            }
            if !(d.rate.bitrate > 0.0) || !d.rate.bitrate.is_finite() {
                return Err(ModelError::InvalidBitrate(d.rate.label.clone()));
            }
        }
        Ok(Self { demands })
    }

    pub fn len(&self) -> usize {
        self.demands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demands.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Demand> {
        self.demands.iter()
    }

    pub fn as_slice(&self) -> &[Demand] {
        &self.demands
    }

    /// Same demands in a different order; used for admission-order experiments.
    pub fn reordered(&self, order: &[usize]) -> Self {
        Self {
            demands: order.iter().map(|&i| self.demands[i].clone()).collect(),
        }
    }
}

impl Index<usize> for DemandSet {
    type Output = Demand;

    fn index(&self, index: usize) -> &Demand {
        &self.demands[index]
    }
}

impl<'a> IntoIterator for &'a DemandSet {
    type Item = &'a Demand;
    type IntoIter = core::slice::Iter<'a, Demand>;

    fn into_iter(self) -> Self::IntoIter {
        self.demands.iter()
    }
}
