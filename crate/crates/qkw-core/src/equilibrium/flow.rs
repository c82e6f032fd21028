use alloc::vec::Vec;

use crate::channel::{ChannelError, CommodityBasis, EDGE_EPS};
use crate::circuit::{round_branches, Agent, Good, StrategyEnsemble};

/// One steady-state goods flow: `from` hands `good` to `to` with the given
/// per-round probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowEdge {
    pub from: Agent,
    pub to: Agent,
    pub good: Good,
    pub probability: f64,
}

#[derive(Debug, Clone)]
pub struct FlowGraph {
    pub edges: Vec<FlowEdge>,
    /// Goods accepted by an agent who neither consumes nor produces them,
    /// with the accepting agent.
    pub media: Vec<(Good, Agent)>,
}

impl FlowGraph {
    pub fn media_goods(&self) -> Vec<Good> {
        let mut goods: Vec<Good> = self.media.iter().map(|&(g, _)| g).collect();
        goods.sort_unstable();
        goods.dedup();
        goods
    }
}

/// Goods-flow digraph of a steady distribution: every positive-probability
/// trade becomes an edge labeled by the good handed over. The pre-consumption
/// holdings of a branch are reconstructed from its flags (a set flag means
/// the agent received their consumption good before producing).
pub fn flow_graph(
    steady: &[f64; 8],
    ensemble: &StrategyEnsemble,
) -> Result<FlowGraph, ChannelError> {
    let mut edges: Vec<FlowEdge> = Vec::new();
    let mut add = |from: Agent, to: Agent, good: Good, p: f64| {
        if let Some(e) = edges
            .iter_mut()
            .find(|e| e.from == from && e.to == to && e.good == good)
        {
            e.probability += p;
        } else {
            edges.push(FlowEdge { from, to, good, probability: p });
        }
    };
    for (weight, profile) in ensemble.parts() {
        for k in 0..8 {
            if steady[k] <= EDGE_EPS {
                continue;
            }
            let source = CommodityBasis::triple(k);
            for b in round_branches(source, profile)? {
                let pre: [Good; 3] = core::array::from_fn(|a| {
                    let agent = Agent::ALL[a];
                    if b.flag(agent) {
                        agent.consumption()
                    } else {
                        b.goods[a]
                    }
                });
                if pre == source {
                    continue;
                }
                let (i, j) = b.meeting.agents();
                let p = weight * steady[k] * b.probability();
                if p > EDGE_EPS {
                    add(i, j, source[i as usize], p);
                    add(j, i, source[j as usize], p);
                }
            }
        }
    }
    edges.retain(|e| e.probability > EDGE_EPS);
    let mut media: Vec<(Good, Agent)> = Vec::new();
    for e in &edges {
        let receiver = e.to;
        if e.good != receiver.consumption() && e.good != receiver.production() {
            let entry = (e.good, receiver);
            if !media.contains(&entry) {
                media.push(entry);
            }
        }
    }
    media.sort_unstable();
    Ok(FlowGraph { edges, media })
}
