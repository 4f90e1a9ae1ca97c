//! Linear trajectory links written as `target = a*control + b`.

use wehrl_qpt::surfaces::LinearLink;

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Parses `gamma_y=-gamma_x+2`, `y = 0.5*x - 1` and similar. Returns the
/// link and the variable name used on the right-hand side.
pub fn parse_line(text: &str) -> Result<(LinearLink, String), String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (lhs, rhs) = compact.split_once('=').ok_or_else(|| format!("expected 'target=expression' in '{text}'"))?;
    if !is_ident(lhs) {
        return Err(format!("'{lhs}' is not a parameter name"));
    }
    if rhs.is_empty() {
        return Err(format!("empty right-hand side in '{text}'"));
    }

    // Split into signed terms, keeping exponent signs such as 1e-3 intact.
    let mut terms = Vec::new();
    let mut current = String::new();
    for ch in rhs.chars() {
        let after_exponent = current.ends_with(['e', 'E'])
            && current[..current.len() - 1].chars().last().is_some_and(|c| c.is_ascii_digit() || c == '.');
        if (ch == '+' || ch == '-') && !current.is_empty() && current != "+" && current != "-" && !after_exponent {
            terms.push(std::mem::take(&mut current));
        }
        current.push(ch);
    }
    terms.push(current);

    let mut slope = 0.0;
    let mut intercept = 0.0;
    let mut var: Option<String> = None;
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1.0, b),
            None => (1.0, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (coef, name) = match body.split_once('*') {
            Some((c, n)) => (c.parse::<f64>().map_err(|_| format!("bad coefficient '{c}'"))?, Some(n)),
            None if is_ident(body) => (1.0, Some(body)),
            None => (body.parse::<f64>().map_err(|_| format!("bad term '{term}'"))?, None),
        };
        match name {
            None => intercept += sign * coef,
            Some(n) if !is_ident(n) => return Err(format!("'{n}' is not a parameter name")),
            Some(n) => {
                if let Some(v) = &var {
                    if v != n {
                        return Err(format!("more than one variable ('{v}', '{n}')"));
                    }
                }
                var = Some(n.to_string());
                slope += sign * coef;
            }
        }
    }
    let var = var.ok_or_else(|| format!("no control variable in '{text}'"))?;
    if var == lhs {
        return Err(format!("'{lhs}' appears on both sides"));
    }
    Ok((
        LinearLink {
            target: lhs.to_string(),
            slope,
            intercept,
        },
        var,
    ))
}

/// Canonical text of a link; parses back to the same values.
pub fn format_line(link: &LinearLink, control: &str) -> String {
    format!("{}={:?}*{}{:+?}", link.target, link.slope, control, link.intercept)
}
