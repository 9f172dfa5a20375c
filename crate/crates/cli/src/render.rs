//! Human-oriented rendering for command output.
//!
//! The core's canonical form prints every term separately with `K[...]`
//! torus words; for terminal output we regroup terms that share a common
//! denominator into a single quotient and write torus characters
//! multiplicatively, so the rank-one cross term comes out as
//! `(t1 - t1^-1)/(q - q^-1)` instead of two `K[...]` summands.  Everything
//! printed here reparses to an equal element.

use qsp_core::text::qrat_parts;
use qsp_core::uq::filtration::term_bidegree;
use qsp_core::{Element, NormalWord, QRat};

// ---------------------------------------------------------------------------
// words
// ---------------------------------------------------------------------------

/// Word with torus characters written as powers of the t generators.
fn word_string(w: &NormalWord) -> String {
    let mut parts: Vec<String> = Vec::new();
    for &l in &w.y {
        parts.push(format!("y{}", l + 1));
    }
    for (i, &k) in w.t.iter().enumerate() {
        if k == 1 {
            parts.push(format!("t{}", i + 1));
        } else if k != 0 {
            parts.push(format!("t{}^{}", i + 1, k));
        }
    }
    for &l in &w.x {
        parts.push(format!("x{}", l + 1));
    }
    parts.join(" ")
}

// ---------------------------------------------------------------------------
// terms and denominator groups
// ---------------------------------------------------------------------------

struct Term {
    neg: bool,
    /// numerator body, unparenthesized
    num: String,
    /// denominator body for true fractions
    den: Option<String>,
    word: String,
    key: NormalWord,
}

/// Split the coefficient body produced by `qrat_parts` into numerator and
/// denominator.  True fractions always print as `num/(den)`, and neither
/// half contains the marker itself.
fn split_fraction(body: &str) -> (String, Option<String>) {
    let Some(pos) = body.rfind("/(") else {
        return (body.to_string(), None);
    };
    let mut num = &body[..pos];
    if num.starts_with('(') && num.ends_with(')') {
        num = &num[1..num.len() - 1];
    }
    let den = &body[pos + 2..body.len() - 1];
    (num.to_string(), Some(den.to_string()))
}

fn needs_parens(num: &str) -> bool {
    num.contains(' ')
}

/// Numerator-times-word part of one term.
fn member_string(num: &str, word: &str) -> String {
    if word.is_empty() {
        return num.to_string();
    }
    if num == "1" {
        return word.to_string();
    }
    if needs_parens(num) {
        format!("({num}) {word}")
    } else {
        format!("{num} {word}")
    }
}

fn push_signed(out: &mut String, first: bool, neg: bool, body: &str) {
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    out.push_str(body);
}

/// Render an element with denominator grouping and multiplicative torus
/// notation.
pub fn pretty_element(a: &Element) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<Term> = a
        .terms
        .iter()
        .map(|(w, c)| {
            let (neg, body) = qrat_parts(c);
            let (num, den) = split_fraction(&body);
            Term {
                neg,
                num,
                den,
                word: word_string(w),
                key: w.clone(),
            }
        })
        .collect();
    terms.sort_by(|u, v| {
        term_bidegree(&v.key)
            .cmp(&term_bidegree(&u.key))
            .then_with(|| u.key.cmp(&v.key))
    });

    let mut out = String::new();
    let mut emitted = vec![false; terms.len()];
    let mut first = true;
    for k in 0..terms.len() {
        if emitted[k] {
            continue;
        }
        let Some(den) = terms[k].den.clone() else {
            let t = &terms[k];
            push_signed(&mut out, first, t.neg, &member_string(&t.num, &t.word));
            first = false;
            emitted[k] = true;
            continue;
        };
        // collect the whole denominator group, largest word first so sums
        // like t1 - t1^-1 lead with the positive power
        let mut group: Vec<usize> = (k..terms.len())
            .filter(|&m| !emitted[m] && terms[m].den.as_deref() == Some(den.as_str()))
            .collect();
        group.sort_by(|&u, &v| {
            term_bidegree(&terms[v].key)
                .cmp(&term_bidegree(&terms[u].key))
                .then_with(|| terms[v].key.cmp(&terms[u].key))
        });
        // prefer the orientation whose leading member is positive
        if terms[group[0]].neg && !terms[*group.last().expect("nonempty group")].neg {
            group.reverse();
        }
        let lead_neg = terms[group[0]].neg;
        let mut body = String::new();
        for (pos, &m) in group.iter().enumerate() {
            let t = &terms[m];
            push_signed(
                &mut body,
                pos == 0,
                t.neg != lead_neg,
                &member_string(&t.num, &t.word),
            );
            emitted[m] = true;
        }
        let quotient = if group.len() == 1 {
            format!("{body}/({den})")
        } else {
            format!("({body})/({den})")
        };
        push_signed(&mut out, first, lead_neg, &quotient);
        first = false;
    }
    out
}

/// Scalar coefficients keep the core's canonical form.
pub fn pretty_scalar(c: &QRat) -> String {
    qsp_core::text::print_qrat(c)
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use qsp_core::rootdata::{cartan_init, CartanSpec};
    use qsp_core::text::parse_expression;
    use qsp_core::AlgebraContext;

    fn ctx(lbl: &str) -> AlgebraContext {
        let d = cartan_init(&CartanSpec::Series(lbl.into())).unwrap();
        AlgebraContext::with_defaults(d).unwrap()
    }

    #[test]
    fn cross_term_groups_over_the_common_denominator() {
        let c = ctx("A1");
        let p = c.mul(&c.gen_x(0).unwrap(), &c.gen_y(0).unwrap()).unwrap();
        assert_eq!(pretty_element(&p), "y1 x1 + (t1 - t1^-1)/(q - q^-1)");
    }

    #[test]
    fn pretty_output_reparses_to_the_same_element() {
        let c = ctx("A2");
        for src in [
            "x1 y1",
            "x1 y1 x2 y2",
            "K[1,-1] + q x1",
            "y1 x1 - y2 x2",
            "1/(q - q^-1) x1 + 3/2 y2",
        ] {
            let e = parse_expression(&c, src).unwrap();
            let printed = pretty_element(&e);
            let back = parse_expression(&c, &printed).unwrap();
            assert_eq!(back, e, "{src} -> {printed}");
        }
    }

    #[test]
    fn torus_words_print_multiplicatively() {
        let c = ctx("A2");
        let e = parse_expression(&c, "K[2,-1]").unwrap();
        assert_eq!(pretty_element(&e), "t1^2 t2^-1");
    }
}
