use serde_json::Value;

/// Everything a command produced; the binary prints the streams and exits with `exit_code`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    /// The structured result, when the command got far enough to produce one.
    pub payload: Option<Value>,
}

impl CommandResult {
    pub fn text(exit_code: i32, stdout: impl Into<String>, stderr: impl Into<String>) -> Self {
        CommandResult {
            exit_code,
            stdout: stdout.into(),
            stderr: stderr.into(),
            payload: None,
        }
    }
}

pub fn format_matrix(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:>12.6}")).collect();
            format!("  [{}]", cells.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn format_list(xs: &[f64]) -> String {
    let cells: Vec<String> = xs.iter().map(|x| format!("{x}")).collect();
    format!("({})", cells.join(", "))
}
