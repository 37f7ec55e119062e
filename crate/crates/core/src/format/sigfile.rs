use super::FormatError;
use crate::theory::{BigSignature, Control};

/// Reads lines `control <name> free=<n> binding=<n> [atomic]`. Blank lines
/// and `#` comments are skipped.
pub fn parse_signature(text: &str) -> Result<BigSignature, FormatError> {
    let mut controls = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| FormatError::Syntax { line: i + 1, message };
        let mut words = line.split_whitespace();
        if words.next() != Some("control") {
            return Err(err("expected `control`".into()));
        }
        let name = words.next().ok_or_else(|| err("missing control name".into()))?;
        let (mut free, mut binding, mut atomic) = (None, None, false);
        for w in words {
            let slot = match w.split_once('=') {
                Some(("free", n)) => (&mut free, n),
                Some(("binding", n)) => (&mut binding, n),
                None if w == "atomic" && !atomic => {
                    atomic = true;
                    continue;
                }
                _ => return Err(err(format!("unexpected `{w}`"))),
            };
            if slot.0.is_some() {
                return Err(err(format!("repeated `{w}`")));
            }
            *slot.0 = Some(slot.1.parse::<usize>().map_err(|_| err(format!("arity must be a natural number in `{w}`")))?);
        }
        let free = free.ok_or_else(|| err("missing free=<n>".into()))?;
        let binding = binding.ok_or_else(|| err("missing binding=<n>".into()))?;
        controls.push(Control::new(name, binding, free, atomic));
    }
    Ok(BigSignature::new(controls)?)
}

pub fn serialize_signature(sig: &BigSignature) -> String {
    let mut out = String::new();
    for c in &sig.controls {
        out.push_str(&format!("control {} free={} binding={}", c.name, c.free, c.binding));
        if c.atomic {
            out.push_str(" atomic");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines() {
        let s = parse_signature("# pi\ncontrol get free=1 binding=1\n\ncontrol k binding=0 free=2 atomic  # trailing\n").unwrap();
        assert_eq!(s.controls, vec![Control::new("get", 1, 1, false), Control::new("k", 0, 2, true)]);
        assert_eq!(parse_signature(&serialize_signature(&s)).unwrap(), s);
        assert!(parse_signature("").unwrap().controls.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        for (text, line) in [
            ("control k free=-1 binding=0", 1),
            ("\ncontrol k free=1", 2),
            ("control k free=1 binding=0 free=2", 1),
            ("node k free=1 binding=0", 1),
            ("control get free=1 binding=1\ncontrol get free=1 binding=1 extra", 2),
        ] {
            match parse_signature(text) {
                Err(FormatError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(parse_signature("control nu free=0 binding=0"), Err(FormatError::Signature(_))));
    }
}
