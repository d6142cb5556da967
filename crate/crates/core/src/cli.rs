//! The `cnl` command: an interactive dialog, or a batch run over a file.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::Parser;
use serde::Serialize;

use crate::executor::{ConsoleIo, ExecIo, ScriptedIo};
use crate::kb::KnowledgeBase;
use crate::lexicon::{Category, LexEntry, Lexicon};
use crate::parser::ParseError;
use crate::session::{Outcome, Session, SessionError};

#[derive(Debug, Clone, Default, Parser)]
#[command(name = "cnl", version, about = "Write specifications in controlled English, query and run them")]
pub struct Config {
    /// Lexicon file; the bundled ATM lexicon by default.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Knowledge base to start from.
    #[arg(long)]
    pub kb: Option<PathBuf>,
    /// Process this file line by line and print a JSON report.
    #[arg(long)]
    pub batch: Option<PathBuf>,
    /// Replies for questions asked while running scenarios, one per line.
    #[arg(long = "script-io")]
    pub script_io: Option<PathBuf>,
    /// Resolution depth bound.
    #[arg(long, default_value_t = crate::inference::DEFAULT_DEPTH)]
    pub depth: usize,
    /// Print DRSs and clauses for every sentence to stderr.
    #[arg(long)]
    pub trace: bool,
    /// Exit 0 even if some lines were rejected.
    #[arg(long)]
    pub lenient: bool,
}

pub const HELP: &str = "\
Sentences ending in '.' are added to the specification, '?' asks a question.
Commands:
  :kb [pred]                 list clauses, optionally one predicate
  :drs                       show the discourse so far
  :paraphrase                the knowledge base in English
  :scenario <name> ... :end  record a scenario, one sentence per line
  :run <name> [keep]         run a scenario; keep adds facts you supplied
  :timeline <name>           the events of a scenario and their order
  :interface <pred>/<n> \"prompt\"  ask the user when <pred> is executed
  :lexicon add <entry>       add an entry, e.g. noun|printer|printer|printer|gender=n
  :lexicon list | save <path>
  :save <path> | :load <path>
  :depth <n>                 resolution depth bound
  :choose <n>                pick a reading of an ambiguous sentence
  :help | :quit";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineStatus {
    Ok,
    Rejected,
    Ambiguous,
    Error,
    Empty,
    Quit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineReport {
    pub line: usize,
    pub input: String,
    pub status: LineStatus,
    pub output: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub lines: usize,
    pub rejections: usize,
    pub clauses: usize,
    pub denials: usize,
}

/// Handles input lines for either mode.
pub struct Dialog {
    pub session: Session,
    pub trace: bool,
    recording: Option<(String, Vec<String>)>,
    script: Option<ScriptedIo>,
    /// Unknown words are offered for the lexicon instead of rejected.
    pub interactive: bool,
}

fn unquote(s: &str) -> &str {
    s.trim().trim_matches('"')
}

impl Dialog {
    pub fn new(session: Session) -> Self {
        Dialog {
            session,
            trace: false,
            recording: None,
            script: None,
            interactive: false,
        }
    }

    pub fn with_script(mut self, script: ScriptedIo) -> Self {
        self.script = Some(script);
        self
    }

    pub fn recording(&self) -> bool {
        self.recording.is_some()
    }

    fn trace_outcome(&self, o: &Outcome, err: &mut dyn Write) {
        if !self.trace {
            return;
        }
        match o {
            Outcome::Asserted(a) | Outcome::Rejected(a) => {
                let _ = writeln!(err, "drs: {}", a.drs.to_term());
                let _ = writeln!(err, "simplified: {}", a.simplified.to_term());
                for r in &a.resolution.entries {
                    let _ = writeln!(err, "resolved: {r}");
                }
                for r in &a.translation.rules {
                    let _ = writeln!(err, "rule: {r}");
                }
                for c in &a.translation.clauses {
                    let _ = writeln!(err, "clause: {c}");
                }
                for d in &a.translation.denials {
                    let _ = writeln!(err, "clause: {d}");
                }
            }
            Outcome::Answered(q) => {
                let _ = writeln!(err, "drs: {}", q.drs.to_term());
                let _ = writeln!(err, "goals: {}", q.goals.join(", "));
            }
            Outcome::Ambiguous(_) => {}
        }
    }

    /// One line of input. `ask` reads an answer from the user, if there is one.
    pub fn handle(&mut self, line: &str, err: &mut dyn Write, ask: &mut dyn FnMut(&str) -> Option<String>) -> (LineStatus, Vec<String>) {
        let line = line.trim();
        if let Some((_, lines)) = &mut self.recording {
            if line == ":end" {
                let (name, lines) = self.recording.take().expect("recording");
                let n = lines.len();
                self.session.define_scenario(&name, lines);
                return (LineStatus::Ok, vec![format!("scenario {name}: {n} sentences")]);
            }
            if !line.is_empty() {
                lines.push(line.to_string());
            }
            return (LineStatus::Empty, vec![]);
        }
        if line.is_empty() || line.starts_with('%') {
            return (LineStatus::Empty, vec![]);
        }
        if let Some(cmd) = line.strip_prefix(':') {
            return self.command(cmd, err);
        }
        let mut out = Vec::new();
        let mut status = LineStatus::Ok;
        let mut offered = Vec::new();
        loop {
            let results = self.session.process(line);
            let unknown = results.iter().find_map(|r| match r {
                Err(SessionError::Parse(ParseError::UnknownWord { word, .. })) => Some(word.clone()),
                _ => None,
            });
            let fresh = unknown.as_ref().is_some_and(|w| !offered.contains(w));
            if let (Some(word), true) = (unknown, self.interactive && fresh) {
                offered.push(word.clone());
                if self.offer_entry(&word, ask, &mut out) {
                    // nothing from a failed line was kept, so try it again
                    let processed_ok = results.iter().take_while(|r| r.is_ok()).count();
                    if processed_ok == 0 {
                        continue;
                    }
                }
            }
            for r in results {
                match r {
                    Ok(o) => {
                        self.trace_outcome(&o, err);
                        match &o {
                            Outcome::Rejected(_) => status = LineStatus::Rejected,
                            Outcome::Ambiguous(_) if status == LineStatus::Ok => status = LineStatus::Ambiguous,
                            _ => {}
                        }
                        out.push(o.message());
                    }
                    Err(e) => {
                        status = LineStatus::Error;
                        out.push(format!("error: {e}"));
                    }
                }
            }
            return (status, out);
        }
    }

    fn offer_entry(&mut self, word: &str, ask: &mut dyn FnMut(&str) -> Option<String>, out: &mut Vec<String>) -> bool {
        let prompt = format!("\"{word}\" is not in the lexicon. Category (noun, adjective, verb, proper-noun), empty to skip:");
        let Some(cat) = ask(&prompt).filter(|c| !c.trim().is_empty()) else {
            return false;
        };
        let category = match cat.trim().parse::<Category>() {
            Ok(c) if c.is_open() => c,
            _ => {
                out.push(format!("error: \"{}\" is not a word class", cat.trim()));
                return false;
            }
        };
        let mut lemma = word.to_lowercase();
        if category == Category::Verb {
            if let Some(l) = ask(&format!("Base form [{lemma}]:")).filter(|l| !l.trim().is_empty()) {
                lemma = l.trim().to_lowercase();
            }
        }
        let surface = if category == Category::ProperNoun { word.to_string() } else { lemma };
        match self.session.lexicon.add_entry(LexEntry::new(category, &surface)) {
            Ok(()) => {
                out.push(format!("added {category} \"{surface}\""));
                true
            }
            Err(e) => {
                out.push(format!("error: {e}"));
                false
            }
        }
    }

    fn command(&mut self, cmd: &str, err: &mut dyn Write) -> (LineStatus, Vec<String>) {
        let (name, rest) = cmd.split_once(char::is_whitespace).unwrap_or((cmd, ""));
        let rest = rest.trim();
        let ok = |lines: Vec<String>| (LineStatus::Ok, lines);
        let fail = |e: String| (LineStatus::Error, vec![format!("error: {e}")]);
        match name {
            "quit" | "q" | "exit" => (LineStatus::Quit, vec![]),
            "help" | "h" => ok(vec![HELP.to_string()]),
            "kb" => {
                let pred = (!rest.is_empty()).then_some(rest);
                ok(self
                    .session
                    .kb
                    .list(pred)
                    .into_iter()
                    .map(|(c, src)| format!("{c:<50} % {}", src.text))
                    .collect())
            }
            "drs" => ok(vec![self.session.context().to_boxes()]),
            "paraphrase" => ok(self.session.paraphrase()),
            "depth" => match rest.parse::<usize>() {
                Ok(n) if n > 0 => {
                    self.session.depth = n;
                    ok(vec![format!("depth {n}")])
                }
                _ if rest.is_empty() => ok(vec![format!("depth {}", self.session.depth)]),
                _ => fail(format!("bad depth \"{rest}\"")),
            },
            "choose" => match rest.parse::<usize>() {
                Ok(n) => match self.session.choose(n) {
                    Ok(o) => {
                        self.trace_outcome(&o, err);
                        let status = if o.is_rejection() { LineStatus::Rejected } else { LineStatus::Ok };
                        (status, vec![o.message()])
                    }
                    Err(e) => fail(e.to_string()),
                },
                Err(_) => fail(format!("bad reading number \"{rest}\"")),
            },
            "save" if !rest.is_empty() => match self.session.save_kb(rest.as_ref()) {
                Ok(()) => ok(vec![format!("saved {} clauses to {rest}", self.session.kb.len())]),
                Err(e) => fail(e.to_string()),
            },
            "load" if !rest.is_empty() => match self.session.load_kb(rest.as_ref()) {
                Ok(()) => ok(vec![format!("loaded {} clauses from {rest}", self.session.kb.len())]),
                Err(e) => fail(e.to_string()),
            },
            "lexicon" => {
                let (sub, arg) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                match sub {
                    "add" => match self.session.add_lexicon_entry(arg.trim()) {
                        Ok(e) => ok(vec![format!("added {} \"{}\"", e.category, e.surface)]),
                        Err(e) => fail(e.to_string()),
                    },
                    "list" | "" => ok(self.session.lexicon.entries().iter().map(LexEntry::to_line).collect()),
                    "save" if !arg.trim().is_empty() => match self.session.lexicon.save(arg.trim().as_ref()) {
                        Ok(()) => ok(vec![format!("saved lexicon to {}", arg.trim())]),
                        Err(e) => fail(e.to_string()),
                    },
                    other => fail(format!("unknown lexicon command \"{other}\"")),
                }
            }
            "scenario" if !rest.is_empty() => {
                self.recording = Some((rest.to_string(), Vec::new()));
                ok(vec![format!("recording scenario {rest}; finish with :end")])
            }
            "end" => fail("not recording a scenario".into()),
            "timeline" if !rest.is_empty() => match self.session.timeline(rest) {
                Ok((t, evs)) => {
                    let mut lines: Vec<String> = evs.iter().map(|e| format!("{} at {}", e, e.time)).collect();
                    lines.push(t.to_string());
                    ok(lines)
                }
                Err(e) => fail(e.to_string()),
            },
            "interface" => {
                let (sig, prompt) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let parsed = sig
                    .split_once('/')
                    .and_then(|(p, n)| Some((p.to_string(), n.parse::<usize>().ok()?)));
                match parsed {
                    Some((pred, arity)) => match self.session.register_prompt(&pred, arity, unquote(prompt)) {
                        Ok(()) => ok(vec![format!("{pred}/{arity} asks \"{}\"", unquote(prompt))]),
                        Err(e) => fail(e.to_string()),
                    },
                    None => fail(format!("expected <pred>/<arity>, got \"{sig}\"")),
                }
            }
            "run" if !rest.is_empty() => {
                let (scenario, keep) = match rest.rsplit_once(char::is_whitespace) {
                    Some((s, "keep")) => (s.trim(), true),
                    _ => (rest, false),
                };
                let result = match &mut self.script {
                    Some(io) => self.session.run_scenario(scenario, io, keep),
                    None => self.session.run_scenario(scenario, &mut ConsoleIo as &mut dyn ExecIo, keep),
                };
                match result {
                    Ok(trace) => ok(trace.to_string().lines().map(str::to_string).collect()),
                    Err(e) => fail(e.to_string()),
                }
            }
            other => fail(format!("unknown command \":{other}\"; try :help")),
        }
    }
}

fn setup(config: &Config) -> Result<Dialog, String> {
    let lexicon = match &config.lexicon {
        Some(p) => Lexicon::load(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => Lexicon::atm(),
    };
    let mut session = Session::new(lexicon);
    session.depth = config.depth;
    if let Some(p) = &config.kb {
        let kb = KnowledgeBase::load(p).map_err(|e| e.to_string())?;
        session.set_kb(kb);
    }
    let mut dialog = Dialog::new(session);
    dialog.trace = config.trace;
    if let Some(p) = &config.script_io {
        let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        dialog.script = Some(ScriptedIo::from_text(&text));
    }
    Ok(dialog)
}

/// Runs lines from a file; returns the per-line reports and a summary.
pub fn batch(dialog: &mut Dialog, text: &str, err: &mut dyn Write) -> (Vec<LineReport>, Summary) {
    if dialog.script.is_none() {
        dialog.script = Some(ScriptedIo::default());
    }
    let mut reports: Vec<LineReport> = Vec::new();
    let mut pending: Option<usize> = None;
    for (i, line) in text.lines().enumerate() {
        let is_choice = line.trim_start().starts_with(":choose");
        if let (Some(p), false) = (pending, is_choice) {
            if !line.trim().is_empty() {
                reports[p].status = LineStatus::Rejected;
                pending = None;
            }
        }
        let (status, output) = dialog.handle(line, err, &mut |_| None);
        if status == LineStatus::Empty {
            continue;
        }
        if is_choice {
            if let Some(p) = pending.take() {
                if status != LineStatus::Ok {
                    reports[p].status = LineStatus::Rejected;
                } else {
                    reports[p].status = LineStatus::Ok;
                }
            }
        }
        reports.push(LineReport {
            line: i + 1,
            input: line.trim().to_string(),
            status,
            output,
        });
        if status == LineStatus::Ambiguous {
            pending = Some(reports.len() - 1);
        }
        if status == LineStatus::Quit {
            break;
        }
    }
    if let Some(p) = pending {
        reports[p].status = LineStatus::Rejected;
    }
    let summary = Summary {
        lines: reports.len(),
        rejections: reports
            .iter()
            .filter(|r| matches!(r.status, LineStatus::Rejected | LineStatus::Error))
            .count(),
        clauses: dialog.session.kb.clauses().len(),
        denials: dialog.session.kb.denials().count(),
    };
    (reports, summary)
}

fn read_line() -> Option<String> {
    let mut line = String::new();
    match io::stdin().read_line(&mut line) {
        Ok(0) | Err(_) => None,
        Ok(_) => Some(line.trim_end_matches(['\r', '\n']).to_string()),
    }
}

fn repl(dialog: &mut Dialog) -> i32 {
    dialog.interactive = true;
    println!("Controlled English specification dialog. :help lists commands.");
    let mut ask = |prompt: &str| -> Option<String> {
        print!("{prompt} ");
        io::stdout().flush().ok();
        read_line().map(|l| l.trim().to_string())
    };
    loop {
        print!("{}", if dialog.recording() { "... " } else { "> " });
        io::stdout().flush().ok();
        let Some(line) = read_line() else {
            println!();
            return 0;
        };
        let (mut status, out) = dialog.handle(&line, &mut io::stderr(), &mut ask);
        for l in out {
            println!("{l}");
        }
        while status == LineStatus::Ambiguous {
            let Some(n) = ask("Reading number (empty to drop the sentence):").filter(|n| !n.is_empty()) else {
                break;
            };
            let (s, out) = dialog.handle(&format!(":choose {n}"), &mut io::stderr(), &mut ask);
            for l in out {
                println!("{l}");
            }
            if s != LineStatus::Error {
                status = s;
            }
        }
        if status == LineStatus::Quit {
            return 0;
        }
    }
}

/// Exit status: 0 fine, 1 some lines rejected, 2 bad usage or files.
pub fn run(config: Config) -> i32 {
    let mut dialog = match setup(&config) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("cnl: {e}");
            return 2;
        }
    };
    let Some(path) = &config.batch else {
        return repl(&mut dialog);
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cnl: {}: {e}", path.display());
            return 2;
        }
    };
    let (reports, summary) = batch(&mut dialog, &text, &mut io::stderr());
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for r in &reports {
        let _ = writeln!(out, "{}", serde_json::to_string(r).expect("serializable"));
    }
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string(&serde_json::json!({ "summary": summary })).expect("serializable")
    );
    if summary.rejections > 0 && !config.lenient {
        1
    } else {
        0
    }
}
