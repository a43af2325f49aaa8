//! Independent replay of a certificate. Shares no code with construction
//! beyond the node types: the expected children of every rule are
//! re-derived here and every leaf is re-read from a cohomology table.

use crate::projcoh::{Bundle, CohomMemo};

use super::{Rule, SheafKind, SheafNode, VanishCertificate};

fn expected_children(node: &SheafNode, rule: Rule) -> Result<Vec<SheafNode>, String> {
    let d = node.d as i64;
    match (rule, node.kind) {
        (Rule::Restriction, SheafKind::RestrictedSym | SheafKind::RestrictedLine) => {
            let ambient = if node.kind == SheafKind::RestrictedSym { SheafKind::AmbientSym } else { SheafKind::AmbientLine };
            if (node.kind == SheafKind::RestrictedLine) != (node.m == 0) {
                return Err(format!("{node}: power does not match sheaf kind"));
            }
            Ok(vec![
                SheafNode { kind: ambient, ..*node },
                SheafNode { kind: ambient, e: node.e - d, i: node.i + 1, ..*node },
            ])
        }
        (Rule::Conormal, SheafKind::IntrinsicSym) => {
            if node.i != 0 || node.m == 0 {
                return Err(format!("{node}: conormal rule only applies to H^0 with m >= 1"));
            }
            let left_kind = if node.m == 1 { SheafKind::RestrictedLine } else { SheafKind::RestrictedSym };
            Ok(vec![
                SheafNode { kind: SheafKind::RestrictedSym, ..*node },
                SheafNode { kind: left_kind, m: node.m - 1, e: node.e - d, i: 1, ..*node },
            ])
        }
        (Rule::Leaf, SheafKind::AmbientSym | SheafKind::AmbientLine) => Ok(Vec::new()),
        _ => Err(format!("{node}: rule {rule:?} does not apply to this sheaf")),
    }
}

fn table_value(node: &SheafNode, memo: &CohomMemo) -> Result<u64, String> {
    let t = match node.kind {
        SheafKind::AmbientSym => memo.get(node.n, Bundle::SymOmega, node.m, node.e),
        _ => memo.get(node.n, Bundle::LineBundle, 0, node.e),
    }
    .map_err(|e| format!("{node}: {e}"))?;
    Ok(t.h.get(node.i as usize).copied().unwrap_or(0))
}

/// Walk the certificate; `Err` names the first step that does not replay.
pub fn verify_certificate(cert: &VanishCertificate, memo: &CohomMemo) -> Result<(), String> {
    let expected = expected_children(&cert.root, cert.rule)?;
    if cert.rule == Rule::Leaf {
        let v = table_value(&cert.root, memo)?;
        if v != 0 || cert.value != Some(0) {
            return Err(format!("{}: leaf records {:?}, table gives {v}", cert.root, cert.value));
        }
        return Ok(());
    }
    let got: Vec<SheafNode> = cert.children.iter().map(|c| c.root).collect();
    if got != expected {
        return Err(format!("{}: children {:?} differ from the {:?} rule", cert.root, got, cert.rule));
    }
    cert.children.iter().try_for_each(|c| verify_certificate(c, memo))
}
