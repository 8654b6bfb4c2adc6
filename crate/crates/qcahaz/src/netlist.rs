//! Two-level gate netlists and deterministic event-driven timing simulation.
//!
//! The netlist realizes a cover as NOT/AND/OR gates with per-gate transport
//! delays (integer time units, wires delay-free). Simulation propagates
//! input steps event by event, so arbitrarily narrow output glitches survive
//! to the trace instead of being filtered.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::sop::{Assignment, Cover};

pub type NetId = usize;
pub type GateId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Not,
    And,
    Or,
}

/// Stable gate addressing for delay maps and CLI flags: `not.<var>`,
/// `and.<term index>`, `or`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GateRole {
    Not(String),
    And(usize),
    Or,
}

impl fmt::Display for GateRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateRole::Not(var) => write!(f, "not.{var}"),
            GateRole::And(i) => write!(f, "and.{i}"),
            GateRole::Or => write!(f, "or"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: GateId,
    pub kind: GateKind,
    pub role: GateRole,
    pub inputs: Vec<NetId>,
    pub output: NetId,
    pub delay: u64,
}

impl Gate {
    fn eval(&self, values: &[bool]) -> bool {
        match self.kind {
            GateKind::Not => !values[self.inputs[0]],
            GateKind::And => self.inputs.iter().all(|&n| values[n]),
            GateKind::Or => self.inputs.iter().any(|&n| values[n]),
        }
    }
}

/// Acyclic two-level netlist. Gates are stored in topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateNetlist {
    pub primary_inputs: Vec<(String, NetId)>,
    pub primary_output: NetId,
    pub gates: Vec<Gate>,
    pub net_count: usize,
}

/// Per-role gate delays; roles not present fall back to 1 time unit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DelayMap {
    map: BTreeMap<GateRole, u64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetlistError {
    #[error("constant cover cannot be realized as a gate netlist")]
    ConstantCover,
    #[error("delay for {0} must be at least 1")]
    InvalidDelay(GateRole),
    #[error("assignment has {got} bits but the netlist has {expected} inputs")]
    AssignmentWidth { expected: usize, got: usize },
    #[error("event trace does not settle back to the steady value")]
    SteadyMismatch,
}

impl DelayMap {
    pub fn new() -> Self {
        DelayMap::default()
    }

    pub fn set(&mut self, role: GateRole, delay: u64) -> Result<(), NetlistError> {
        if delay == 0 {
            return Err(NetlistError::InvalidDelay(role));
        }
        self.map.insert(role, delay);
        Ok(())
    }

    pub fn get(&self, role: &GateRole) -> u64 {
        self.map.get(role).copied().unwrap_or(1)
    }

    pub fn roles(&self) -> impl Iterator<Item = &GateRole> {
        self.map.keys()
    }
}

/// One level change on a net at a point in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    pub time: u64,
    pub net: NetId,
    pub value: bool,
}

/// Builds the two-level netlist for a cover: one shared NOT per complemented
/// variable, one AND per multi-literal term (single-literal terms pass
/// through), and one OR when there are several terms. Gate ids are assigned
/// in that construction order.
pub fn sop_to_netlist(cover: &Cover, delays: &DelayMap) -> Result<GateNetlist, NetlistError> {
    if cover.is_structurally_constant() {
        return Err(NetlistError::ConstantCover);
    }
    let n = cover.var_count();
    let mut net_count = n;
    let mut gates: Vec<Gate> = Vec::new();

    let mut alloc_net = || {
        let id = net_count;
        net_count += 1;
        id
    };

    // Shared inverters, in variable order, only for variables used complemented.
    let mut not_net: BTreeMap<usize, NetId> = BTreeMap::new();
    for var in 0..n {
        let used = cover
            .terms()
            .iter()
            .any(|t| t.phase(var) == Some(true));
        if used {
            let out = alloc_net();
            let role = GateRole::Not(cover.variables()[var].name.clone());
            gates.push(Gate {
                id: gates.len(),
                kind: GateKind::Not,
                delay: delays.get(&role),
                role,
                inputs: vec![var],
                output: out,
            });
            not_net.insert(var, out);
        }
    }

    let literal_net = |lit_var: usize, complemented: bool| -> NetId {
        if complemented {
            not_net[&lit_var]
        } else {
            lit_var
        }
    };

    let mut term_nets = Vec::new();
    for (i, term) in cover.terms().iter().enumerate() {
        if term.len() == 1 {
            let l = term.literals()[0];
            term_nets.push(literal_net(l.variable, l.complemented));
        } else {
            let inputs: Vec<NetId> = term
                .literals()
                .iter()
                .map(|l| literal_net(l.variable, l.complemented))
                .collect();
            let out = alloc_net();
            let role = GateRole::And(i);
            gates.push(Gate {
                id: gates.len(),
                kind: GateKind::And,
                delay: delays.get(&role),
                role,
                inputs,
                output: out,
            });
            term_nets.push(out);
        }
    }

    let primary_output = if term_nets.len() == 1 {
        term_nets[0]
    } else {
        let out = alloc_net();
        gates.push(Gate {
            id: gates.len(),
            kind: GateKind::Or,
            delay: delays.get(&GateRole::Or),
            role: GateRole::Or,
            inputs: term_nets,
            output: out,
        });
        out
    };

    Ok(GateNetlist {
        primary_inputs: cover
            .variables()
            .iter()
            .map(|v| (v.name.clone(), v.index))
            .collect(),
        primary_output,
        gates,
        net_count,
    })
}

impl GateNetlist {
    pub fn gate_by_role(&self, role: &GateRole) -> Option<&Gate> {
        self.gates.iter().find(|g| &g.role == role)
    }

    /// Returns a copy with the given per-role delays applied.
    pub fn with_delays(&self, delays: &DelayMap) -> GateNetlist {
        let mut out = self.clone();
        for g in &mut out.gates {
            g.delay = delays.get(&g.role);
        }
        out
    }
}

/// Quiescent net values for an input assignment (topological evaluation).
pub fn settle(netlist: &GateNetlist, a: &Assignment) -> Result<Vec<bool>, NetlistError> {
    if a.len() != netlist.primary_inputs.len() {
        return Err(NetlistError::AssignmentWidth {
            expected: netlist.primary_inputs.len(),
            got: a.len(),
        });
    }
    let mut values = vec![false; netlist.net_count];
    for (i, &(_, net)) in netlist.primary_inputs.iter().enumerate() {
        values[net] = a.bits()[i];
    }
    for gate in &netlist.gates {
        values[gate.output] = gate.eval(&values);
    }
    Ok(values)
}

/// Event-driven transition simulation. Starts from the settled `from` state,
/// applies the `to` input values at time 0, and returns the level changes on
/// the primary output net. Per-gate transport delay: a gate's output at time
/// `t + delay` reflects its inputs at time `t`, so pulses are never
/// swallowed. Simultaneous events apply in ascending net-id order.
pub fn simulate_transition(
    netlist: &GateNetlist,
    from: &Assignment,
    to: &Assignment,
) -> Result<Vec<Event>, NetlistError> {
    let mut values = settle(netlist, from)?;
    if to.len() != netlist.primary_inputs.len() {
        return Err(NetlistError::AssignmentWidth {
            expected: netlist.primary_inputs.len(),
            got: to.len(),
        });
    }

    let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); netlist.net_count];
    for (gi, gate) in netlist.gates.iter().enumerate() {
        for &input in &gate.inputs {
            fanout[input].push(gi);
        }
    }

    // time -> net -> scheduled value; BTreeMaps keep processing deterministic.
    let mut pending: BTreeMap<u64, BTreeMap<NetId, bool>> = BTreeMap::new();
    for (i, &(_, net)) in netlist.primary_inputs.iter().enumerate() {
        if values[net] != to.bits()[i] {
            pending.entry(0).or_default().insert(net, to.bits()[i]);
        }
    }

    let mut output_events = Vec::new();
    while let Some((&time, _)) = pending.iter().next() {
        let changes = pending.remove(&time).unwrap();
        let mut affected: BTreeSet<usize> = BTreeSet::new();
        for (net, value) in changes {
            if values[net] == value {
                continue; // transport no-op
            }
            values[net] = value;
            if net == netlist.primary_output {
                output_events.push(Event {
                    time,
                    net,
                    value,
                });
            }
            for &gi in &fanout[net] {
                affected.insert(gi);
            }
        }
        for gi in affected {
            let gate = &netlist.gates[gi];
            let new_value = gate.eval(&values);
            pending
                .entry(time + gate.delay)
                .or_default()
                .insert(gate.output, new_value);
        }
    }
    Ok(output_events)
}

/// True iff any event deviates from the steady value. The trace must end at
/// the steady value (static analysis only applies when initial and final
/// settled values agree).
pub fn detect_glitch(events: &[Event], steady: bool) -> Result<bool, NetlistError> {
    if let Some(last) = events.last() {
        if last.value != steady {
            return Err(NetlistError::SteadyMismatch);
        }
    }
    Ok(events.iter().any(|e| e.value != steady))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hazard::{detect_static1_hazards, eliminate_hazards};
    use crate::sop::parse_expression;

    fn eq4_delays() -> DelayMap {
        let mut d = DelayMap::new();
        d.set(GateRole::Not("B".into()), 1).unwrap();
        d.set(GateRole::Not("C".into()), 1).unwrap();
        d.set(GateRole::And(0), 1).unwrap();
        d.set(GateRole::And(1), 3).unwrap();
        d.set(GateRole::Or, 1).unwrap();
        d
    }

    #[test]
    fn netlist_shapes_match_expected_gate_counts() {
        let d = DelayMap::new();
        let eq4 = sop_to_netlist(&parse_expression("AB' + BC'").unwrap(), &d).unwrap();
        let count = |nl: &GateNetlist, k: GateKind| {
            nl.gates.iter().filter(|g| g.kind == k).count()
        };
        assert_eq!(count(&eq4, GateKind::Not), 2);
        assert_eq!(count(&eq4, GateKind::And), 2);
        assert_eq!(count(&eq4, GateKind::Or), 1);

        let fixed = sop_to_netlist(&parse_expression("AB' + BC' + AC'").unwrap(), &d).unwrap();
        assert_eq!(count(&fixed, GateKind::Not), 2);
        assert_eq!(count(&fixed, GateKind::And), 3);
        assert_eq!(count(&fixed, GateKind::Or), 1);

        let single = sop_to_netlist(&parse_expression("AB").unwrap(), &d).unwrap();
        assert_eq!(count(&single, GateKind::And), 1);
        assert_eq!(count(&single, GateKind::Or), 0);
    }

    #[test]
    fn constant_cover_is_rejected() {
        let c = crate::sop::Cover::new(vec!["A".into()], vec![]).unwrap();
        assert_eq!(
            sop_to_netlist(&c, &DelayMap::new()).unwrap_err(),
            NetlistError::ConstantCover
        );
    }

    #[test]
    fn settle_agrees_with_cover_eval_exhaustively() {
        for expr in ["AB' + BC'", "A", "AB", "A'B + C", "x0x1 + x1'x2 + x0x2'"] {
            let cover = parse_expression(expr).unwrap();
            let nl = sop_to_netlist(&cover, &DelayMap::new()).unwrap();
            let n = cover.var_count();
            for m in 0..1u32 << n {
                let a = Assignment::from_index(m, n);
                let values = settle(&nl, &a).unwrap();
                assert_eq!(
                    values[nl.primary_output],
                    cover.eval(&a).unwrap(),
                    "{expr} at {a}"
                );
            }
        }
    }

    #[test]
    fn case_study_transition_glitches_with_slow_lower_and() {
        let cover = parse_expression("AB' + BC'").unwrap();
        let nl = sop_to_netlist(&cover, &eq4_delays()).unwrap();
        let from = Assignment::parse("100").unwrap();
        let to = Assignment::parse("110").unwrap();
        let events = simulate_transition(&nl, &from, &to).unwrap();
        let seen: Vec<(u64, bool)> = events.iter().map(|e| (e.time, e.value)).collect();
        // Hand trace: NOT(B) falls at 1, upper AND falls at 2, OR drops at 3;
        // lower AND rises at 3, OR recovers at 4.
        assert_eq!(seen, vec![(3, false), (4, true)]);
        assert!(detect_glitch(&events, true).unwrap());
    }

    #[test]
    fn cured_netlist_holds_output_high() {
        let cover = parse_expression("AB' + BC' + AC'").unwrap();
        let nl = sop_to_netlist(&cover, &eq4_delays()).unwrap();
        let from = Assignment::parse("100").unwrap();
        let to = Assignment::parse("110").unwrap();
        let events = simulate_transition(&nl, &from, &to).unwrap();
        assert!(events.is_empty());
    }

    #[test]
    fn identity_transition_produces_no_events() {
        let cover = parse_expression("AB' + BC'").unwrap();
        let nl = sop_to_netlist(&cover, &eq4_delays()).unwrap();
        let a = Assignment::parse("100").unwrap();
        assert!(simulate_transition(&nl, &a, &a).unwrap().is_empty());
    }

    #[test]
    fn glitch_detector_validates_steady_state() {
        let ev = |time, value| Event {
            time,
            net: 9,
            value,
        };
        assert!(detect_glitch(&[ev(3, false), ev(4, true)], true).unwrap());
        assert!(!detect_glitch(&[], true).unwrap());
        assert_eq!(
            detect_glitch(&[ev(3, false)], true).unwrap_err(),
            NetlistError::SteadyMismatch
        );
    }

    /// Every delay map in {1..4}^gates for all single-bit transitions between
    /// true minterms of the cured cover: no glitch anywhere.
    #[test]
    fn cured_cover_never_glitches_over_the_delay_grid() {
        let cover = parse_expression("AB' + BC' + AC'").unwrap();
        assert!(glitch_free_over_grid(&cover, 4));
    }

    #[test]
    fn hazardous_cover_glitches_somewhere_in_the_grid() {
        let cover = parse_expression("AB' + BC'").unwrap();
        assert!(!glitch_free_over_grid(&cover, 4));
    }

    /// Universal direction on random hazard-free covers: empty hazard report
    /// implies no glitch under any delay map in {1..3}^gates.
    #[test]
    fn hazard_free_random_covers_never_glitch() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9e77);
        let mut tested = 0;
        while tested < 8 {
            let n = rng.gen_range(2..=4usize);
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let mut terms = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let mut pairs: Vec<(usize, bool)> = Vec::new();
                for v in 0..n {
                    if rng.gen_bool(0.6) {
                        pairs.push((v, rng.gen_bool(0.5)));
                    }
                }
                if pairs.is_empty() {
                    continue;
                }
                if let Some(t) = crate::sop::ProductTerm::from_pairs(pairs) {
                    terms.push(t);
                }
            }
            if terms.is_empty() {
                continue;
            }
            let cover = crate::sop::Cover::new(names, terms).unwrap();
            let fixed = eliminate_hazards(&cover).unwrap();
            if fixed.is_structurally_constant() {
                continue;
            }
            let nl = sop_to_netlist(&fixed, &DelayMap::new()).unwrap();
            if nl.gates.len() > 6 {
                continue;
            }
            assert!(
                detect_static1_hazards(&fixed).unwrap().is_hazard_free()
                    && glitch_free_over_grid(&fixed, 3),
                "hazard-free cover glitched: {fixed}"
            );
            tested += 1;
        }
    }

    fn glitch_free_over_grid(cover: &crate::sop::Cover, max_delay: u64) -> bool {
        let n = cover.var_count();
        let base = sop_to_netlist(cover, &DelayMap::new()).unwrap();
        let roles: Vec<GateRole> = base.gates.iter().map(|g| g.role.clone()).collect();
        let combos = (max_delay as usize).pow(roles.len() as u32);

        let true_minterms: Vec<u32> =
            (0..1u32 << n).filter(|&m| cover.eval_minterm(m)).collect();
        let mut transitions = Vec::new();
        for &a in &true_minterms {
            for bit in 0..n {
                let b = a ^ (1 << bit);
                if cover.eval_minterm(b) {
                    transitions.push((a, b));
                }
            }
        }

        for combo in 0..combos {
            let mut d = DelayMap::new();
            let mut c = combo;
            for role in &roles {
                d.set(role.clone(), (c % max_delay as usize) as u64 + 1)
                    .unwrap();
                c /= max_delay as usize;
            }
            let nl = base.with_delays(&d);
            for &(a, b) in &transitions {
                let from = Assignment::from_index(a, n);
                let to = Assignment::from_index(b, n);
                let events = simulate_transition(&nl, &from, &to).unwrap();
                if detect_glitch(&events, true).unwrap() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn simulation_is_deterministic() {
        let cover = parse_expression("AB' + BC'").unwrap();
        let nl = sop_to_netlist(&cover, &eq4_delays()).unwrap();
        let from = Assignment::parse("100").unwrap();
        let to = Assignment::parse("110").unwrap();
        let a = simulate_transition(&nl, &from, &to).unwrap();
        let b = simulate_transition(&nl, &from, &to).unwrap();
        assert_eq!(a, b);
    }
}
