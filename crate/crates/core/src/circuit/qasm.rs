//! OpenQASM 3 export (and import of the emitted subset).
//!
//! Emitted gates come from `stdgates.inc`: `x h sdg rx rz p cx cz cp crx ccx`.
//! `rzz` becomes a CX sandwich; multi-controlled gates are expanded with the
//! square-root construction (controlled-V, (n−1)-controlled X, controlled-V†,
//! (n−1)-controlled X, (n−1)-controlled V).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

#[derive(Clone, Copy)]
enum Rot {
    Rx(f64),
    P(f64),
}

impl Rot {
    fn half(self) -> Rot {
        match self {
            Rot::Rx(a) => Rot::Rx(a / 2.0),
            Rot::P(a) => Rot::P(a / 2.0),
        }
    }

    fn neg(self) -> Rot {
        match self {
            Rot::Rx(a) => Rot::Rx(-a),
            Rot::P(a) => Rot::P(-a),
        }
    }

    fn emit(self, control: Option<usize>, t: usize, out: &mut Vec<String>) {
        let (name, a) = match self {
            Rot::Rx(a) => ("rx", a),
            Rot::P(a) => ("p", a),
        };
        out.push(match control {
            None => format!("{name}({a}) q[{t}];"),
            Some(c) => format!("c{name}({a}) q[{c}], q[{t}];"),
        });
    }
}

fn multi_controlled(rot: Rot, controls: &[usize], t: usize, out: &mut Vec<String>) {
    match controls {
        [] => rot.emit(None, t, out),
        [c] => rot.emit(Some(*c), t, out),
        [rest @ .., last] => {
            let v = rot.half();
            v.emit(Some(*last), t, out);
            multi_controlled_x(rest, *last, out);
            v.neg().emit(Some(*last), t, out);
            multi_controlled_x(rest, *last, out);
            multi_controlled(v, rest, t, out);
        }
    }
}

fn multi_controlled_x(controls: &[usize], t: usize, out: &mut Vec<String>) {
    match controls {
        [] => out.push(format!("x q[{t}];")),
        [c] => out.push(format!("cx q[{c}], q[{t}];")),
        [a, b] => out.push(format!("ccx q[{a}], q[{b}], q[{t}];")),
        [rest @ .., last] => {
            // X = i·RX(π); the phase i is a controlled phase on the controls.
            multi_controlled(Rot::Rx(PI), controls, t, out);
            multi_controlled(Rot::P(FRAC_PI_2), rest, *last, out);
        }
    }
}

fn gate_lines(g: &Gate, out: &mut Vec<String>) {
    let t = g.targets[0];
    match g.kind {
        GateKind::X => out.push(format!("x q[{t}];")),
        GateKind::H => out.push(format!("h q[{t}];")),
        GateKind::Sdg => out.push(format!("sdg q[{t}];")),
        GateKind::Rx(a) => out.push(format!("rx({a}) q[{t}];")),
        GateKind::Rz(a) => out.push(format!("rz({a}) q[{t}];")),
        GateKind::Phase(a) => out.push(format!("p({a}) q[{t}];")),
        GateKind::Cx => out.push(format!("cx q[{}], q[{t}];", g.controls[0])),
        GateKind::Cz => out.push(format!("cz q[{}], q[{t}];", g.controls[0])),
        GateKind::CPhase(a) => out.push(format!("cp({a}) q[{}], q[{t}];", g.controls[0])),
        GateKind::Rzz(a) => {
            let u = g.targets[1];
            out.push(format!("cx q[{t}], q[{u}];"));
            out.push(format!("rz({a}) q[{u}];"));
            out.push(format!("cx q[{t}], q[{u}];"));
        }
        GateKind::Mcx => multi_controlled_x(&g.controls, t, out),
        GateKind::Mcrx(a) => multi_controlled(Rot::Rx(a), &g.controls, t, out),
    }
}

/// OpenQASM 3 text for `circuit`, one gate per line.
pub fn export_qasm(circuit: &Circuit) -> String {
    let mut lines = Vec::new();
    for g in circuit.gates() {
        gate_lines(g, &mut lines);
    }
    let mut s = String::new();
    writeln!(s, "OPENQASM 3.0;").unwrap();
    writeln!(s, "include \"stdgates.inc\";").unwrap();
    writeln!(s, "// gate count: {}", lines.len()).unwrap();
    let regs: Vec<String> = circuit
        .layout()
        .registers
        .iter()
        .map(|r| format!("{}=q[{}:{}]", r.name, r.start, r.start + r.len - 1))
        .collect();
    writeln!(s, "// registers: {}", regs.join(" ")).unwrap();
    let map: Vec<String> = circuit.logical_map().iter().map(|p| p.to_string()).collect();
    writeln!(s, "// logical map: {}", map.join(" ")).unwrap();
    writeln!(s, "qubit[{}] q;", circuit.width()).unwrap();
    for l in lines {
        s.push_str(&l);
        s.push('\n');
    }
    s
}

/// Reads text produced by [`export_qasm`] back into a flat circuit.
/// Returns the circuit and the gate count announced in the header.
pub fn import_qasm(text: &str) -> Result<(Circuit, Option<usize>)> {
    let bad = |l: &str| Error::InvalidGate(format!("cannot import line {l:?}"));
    let mut circ: Option<Circuit> = None;
    let mut announced = None;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix("// gate count:") {
            announced = rest.trim().parse().ok();
            continue;
        }
        if line.starts_with("//") || line.starts_with("OPENQASM") || line.starts_with("include") {
            continue;
        }
        if let Some(w) = line.strip_prefix("qubit[").and_then(|r| r.strip_suffix("] q;")) {
            circ = Some(Circuit::with_width(w.parse().map_err(|_| bad(line))?));
            continue;
        }
        let c = circ.as_mut().ok_or_else(|| bad(line))?;
        let body = line.strip_suffix(';').ok_or_else(|| bad(line))?;
        let (head, args) = body.split_once(' ').ok_or_else(|| bad(line))?;
        let (name, angle) = match head.split_once('(') {
            Some((n, a)) => (n, Some(a.trim_end_matches(')').parse::<f64>().map_err(|_| bad(line))?)),
            None => (head, None),
        };
        let qs: Vec<usize> = args
            .split(',')
            .map(|a| {
                a.trim()
                    .strip_prefix("q[")
                    .and_then(|r| r.strip_suffix(']'))
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| bad(line))
            })
            .collect::<Result<_>>()?;
        let a = || angle.ok_or_else(|| bad(line));
        let gate = match (name, qs.as_slice()) {
            ("x", [t]) => Gate::x(*t),
            ("h", [t]) => Gate::h(*t),
            ("sdg", [t]) => Gate::sdg(*t),
            ("rx", [t]) => Gate::rx(*t, a()?),
            ("rz", [t]) => Gate::rz(*t, a()?),
            ("p", [t]) => Gate::phase(*t, a()?),
            ("cx", [c0, t]) => Gate::cx(*c0, *t),
            ("cz", [c0, t]) => Gate::cz(*c0, *t),
            ("cp", [c0, t]) => Gate::cphase(*c0, *t, a()?),
            ("crx", [c0, t]) => Gate::mcrx(vec![*c0], *t, a()?),
            ("ccx", [c0, c1, t]) => Gate::mcx(vec![*c0, *c1], *t),
            _ => return Err(bad(line)),
        };
        c.push(gate)?;
    }
    Ok((circ.ok_or_else(|| bad("<missing qubit declaration>"))?, announced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_unitary;
    use crate::linalg::equal_up_to_phase;

    #[test]
    fn x_line_format() {
        let mut c = Circuit::with_width(1);
        c.push(Gate::x(0)).unwrap();
        let text = export_qasm(&c);
        assert!(text.starts_with("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n"));
        assert!(text.lines().any(|l| l == "x q[0];"));
        assert!(text.contains("// gate count: 1"));
    }

    #[test]
    fn multi_controlled_expansion_round_trips() {
        for n_controls in 0..=5 {
            let width = n_controls + 1;
            let controls: Vec<usize> = (1..width).collect();
            for gate in [Gate::mcx(controls.clone(), 0), Gate::mcrx(controls.clone(), 0, 0.83)] {
                let mut c = Circuit::with_width(width);
                c.push(gate).unwrap();
                c.push(Gate::rzz(0, width - 1, 0.4)).ok();
                let (back, count) = import_qasm(&export_qasm(&c)).unwrap();
                assert_eq!(count, Some(back.gate_count()));
                let u = circuit_unitary(&c).unwrap();
                let v = circuit_unitary(&back).unwrap();
                assert!(equal_up_to_phase(u.matrix(), v.matrix(), 1e-9), "{n_controls} controls");
            }
        }
    }
}
