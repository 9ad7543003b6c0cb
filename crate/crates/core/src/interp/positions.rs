//! Line and paragraph marks for reading-comprehension contexts.

/// Wraps every non-blank line `i` (counted from 1) in `⟨linei⟩…⟨/linei⟩`
/// and every paragraph `j`, a run of non-blank lines, in `⟨Pj⟩…⟨/Pj⟩`.
/// Blank lines are kept as they are. Text that already carries marks is
/// returned unchanged.
pub fn annotate_positions(context: &str) -> String {
    if is_marked(context) {
        return context.to_string();
    }
    let lines: Vec<&str> = context.split('\n').collect();
    let mut out = Vec::with_capacity(lines.len());
    let mut line_no = 0;
    let mut para_no = 0;
    for (k, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            out.push(line.to_string());
            continue;
        }
        line_no += 1;
        let first = k == 0 || lines[k - 1].trim().is_empty();
        let last = k + 1 == lines.len() || lines[k + 1].trim().is_empty();
        if first {
            para_no += 1;
        }
        let mut marked = String::new();
        if first {
            marked.push_str(&format!("⟨P{para_no}⟩"));
        }
        marked.push_str(&format!("⟨line{line_no}⟩{line}⟨/line{line_no}⟩"));
        if last {
            marked.push_str(&format!("⟨/P{para_no}⟩"));
        }
        out.push(marked);
    }
    out.join("\n")
}

fn is_marked(text: &str) -> bool {
    text.contains("⟨line1⟩") || text.contains("⟨P1⟩")
}
