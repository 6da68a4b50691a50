//! Degree-by-degree search for surfaces with completely degenerate spectrum.
//!
//! Candidates pass a cheap screen (the cylinder configuration must be a
//! single cycle of equal widths in every screening direction) before their
//! orbit and exact sum are computed. Each orbit is handled once, keyed by
//! its least member, and results are persisted so a run can resume.

pub mod candidates;
pub mod db;
pub mod enumerate;

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;

use serde::Serialize;

use crate::cylinder::{check_rank_one_configuration, direction_cylinders};
use crate::error::{Error, Result};
use crate::origami::{orbit_with_cap, parse_origami, Origami, Stratum, DEFAULT_ORBIT_CAP};
use crate::spectrum::exact_sum_over;
use candidates::{cycles_equal_length, shapes, to_origami, ShapeSurfaces};
pub use db::{db_read, db_write, DbLock, DegreeRecord, OrbitErrorRecord, OrbitRecord, Record};
pub use enumerate::{enumerate_origamis, for_each_origami};

pub const DEFAULT_DIRECTIONS: [(i64, i64); 5] = [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)];

/// Where candidates come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Source {
    /// Every surface whose horizontal cylinders form a single cycle of equal
    /// widths; this meets every orbit that can pass the screen.
    RankOne,
    /// Every surface of the stratum, by orderly enumeration.
    Full,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::RankOne => "rank-one",
            Source::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Result<Source> {
        match s {
            "rank-one" => Ok(Source::RankOne),
            "full" => Ok(Source::Full),
            _ => Err(Error::InvalidArgument(format!("unknown source {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub stratum: Stratum,
    pub n_min: usize,
    pub n_max: usize,
    /// Directions `(p, q)`, slope `p / q`.
    pub directions: Vec<(i64, i64)>,
    pub jobs: usize,
    pub db: Option<PathBuf>,
    pub source: Source,
    pub orbit_cap: usize,
    /// Stop after the first degenerate orbit (that degree stays incomplete).
    pub stop_at_first: bool,
}

impl SearchSpec {
    pub fn new(stratum: Stratum, n_min: usize, n_max: usize) -> Self {
        SearchSpec {
            stratum,
            n_min,
            n_max,
            directions: DEFAULT_DIRECTIONS.to_vec(),
            jobs: 1,
            db: None,
            source: Source::RankOne,
            orbit_cap: DEFAULT_ORBIT_CAP,
            stop_at_first: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub complete: bool,
    /// Counts from the completion record; absent for incomplete degrees.
    pub counts: Option<DegreeRecord>,
    pub orbits: Vec<OrbitRecord>,
    pub errors: Vec<OrbitErrorRecord>,
}

impl DegreeReport {
    pub fn degenerate(&self) -> impl Iterator<Item = &OrbitRecord> {
        self.orbits.iter().filter(|o| o.degenerate)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub stratum: String,
    pub degrees: Vec<DegreeReport>,
}

impl SearchReport {
    /// Rebuilds the report for a stratum and degree range from records.
    pub fn from_records(records: &[Record], stratum: &Stratum, n_min: usize, n_max: usize) -> SearchReport {
        let name = stratum.to_string();
        let mut degrees = Vec::new();
        for degree in n_min..=n_max {
            let mine = records.iter().filter(|r| r.stratum() == name && r.degree() == degree);
            let mut orbits = BTreeMap::new();
            let mut errors = BTreeMap::new();
            let mut counts = None;
            for r in mine {
                match r {
                    Record::Orbit(o) => {
                        orbits.entry(o.key.clone()).or_insert_with(|| o.clone());
                    }
                    Record::OrbitError(e) => {
                        errors.entry(e.key.clone()).or_insert_with(|| e.clone());
                    }
                    Record::DegreeComplete(d) => counts = Some(d.clone()),
                }
            }
            degrees.push(DegreeReport {
                degree,
                complete: counts.is_some(),
                counts,
                orbits: orbits.into_values().collect(),
                errors: errors.into_values().collect(),
            });
        }
        SearchReport { stratum: name, degrees }
    }

    pub fn degenerate(&self) -> impl Iterator<Item = &OrbitRecord> {
        self.degrees.iter().flat_map(|d| d.degenerate())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v["schema"] = serde_json::Value::String("origami-kz/search-report/v1".into());
        v
    }
}

/// Whether the cylinders in every direction form one cycle of equal widths.
pub fn passes_screen(o: &Origami, directions: &[(i64, i64)]) -> bool {
    directions.iter().all(|&(p, q)| match direction_cylinders(o, p, q) {
        Ok(d) => check_rank_one_configuration(&d).holds(),
        Err(_) => false,
    })
}

enum Found {
    Orbit(OrbitRecord),
    Error(OrbitErrorRecord),
}

struct Worker<'a> {
    spec: &'a SearchSpec,
    degree: usize,
    known: &'a HashSet<Origami>,
    stop: &'a AtomicBool,
    tx: mpsc::Sender<Found>,
    candidates: u64,
    screened: HashSet<Origami>,
    handled: HashSet<Origami>,
}

impl Worker<'_> {
    fn consider(&mut self, o: &Origami) {
        if !passes_screen(o, &self.spec.directions) {
            return;
        }
        let c = o.canonical_form();
        if !self.screened.insert(c.clone()) {
            return;
        }
        if self.known.contains(&c) || self.handled.contains(&c) {
            return;
        }
        let name = self.spec.stratum.to_string();
        match orbit_with_cap(&c, self.spec.orbit_cap) {
            Ok(graph) => {
                let sum = exact_sum_over(&c, &graph);
                let degenerate = sum.is_one();
                let mut members: Vec<Origami> = graph.nodes().to_vec();
                members.sort();
                let screen_all = degenerate.then(|| members.iter().all(|m| passes_screen(m, &self.spec.directions)));
                for m in &members {
                    self.handled.insert(m.clone());
                }
                let record = OrbitRecord {
                    stratum: name,
                    degree: self.degree,
                    key: members[0].to_cycle_string(),
                    orbit_size: members.len(),
                    sum: sum.value.to_string(),
                    degenerate,
                    screen_all_members: screen_all,
                    members: members.iter().map(|m| m.to_cycle_string()).collect(),
                };
                if degenerate && self.spec.stop_at_first {
                    self.stop.store(true, Ordering::Relaxed);
                }
                let _ = self.tx.send(Found::Orbit(record));
            }
            Err(e) => {
                self.handled.insert(c.clone());
                let _ = self.tx.send(Found::Error(OrbitErrorRecord {
                    stratum: name,
                    degree: self.degree,
                    key: c.to_cycle_string(),
                    error: e.code().into(),
                    message: e.to_string(),
                }));
            }
        }
    }

    fn run(&mut self, id: usize) {
        let jobs = self.spec.jobs.max(1);
        let n = self.degree;
        match self.spec.source {
            Source::RankOne => {
                let mut test = enumerate::StratumTest::new(&self.spec.stratum, n);
                let mut seen = Vec::new();
                for (shape_index, shape) in shapes(n).into_iter().enumerate() {
                    if self.stop.load(Ordering::Relaxed) {
                        return;
                    }
                    let mut surfaces = ShapeSurfaces::new(shape);
                    let take = |branch: usize| stripe(shape_index, branch, jobs) == id;
                    let mut count = 0u64;
                    surfaces.for_each(&take, &mut |h, v| {
                        count += 1;
                        if self.stop.load(Ordering::Relaxed) {
                            return;
                        }
                        if !cycles_equal_length(v, &mut seen) || !test.matches(h, v) {
                            return;
                        }
                        if let Some(o) = to_origami(h, v) {
                            self.consider(&o);
                        }
                    });
                    self.candidates += count;
                }
            }
            Source::Full => {
                let mut k = 0usize;
                for_each_origami(n, Some(&self.spec.stratum), |o| {
                    let mine = k % jobs == id;
                    k += 1;
                    if mine && !self.stop.load(Ordering::Relaxed) {
                        self.candidates += 1;
                        self.consider(o);
                    }
                });
            }
        }
    }
}

/// Deterministic assignment of a work unit to a worker.
fn stripe(shape_index: usize, branch: usize, jobs: usize) -> usize {
    let mut x = (shape_index as u64) << 32 | branch as u64;
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    (x % jobs as u64) as usize
}

/// Runs the search, appending to the database when one is configured, and
/// returns the report rebuilt from all records for the spec's range.
pub fn search_degenerate(spec: &SearchSpec) -> Result<SearchReport> {
    if spec.n_min == 0 || spec.n_min > spec.n_max {
        return Err(Error::InvalidArgument(format!("bad degree range {}..{}", spec.n_min, spec.n_max)));
    }
    let _lock = spec.db.as_deref().map(DbLock::acquire).transpose()?;
    let mut records = match &spec.db {
        Some(p) => db_read(p)?.0,
        None => Vec::new(),
    };
    let name = spec.stratum.to_string();
    let stop = AtomicBool::new(false);
    for degree in spec.n_min..=spec.n_max {
        if stop.load(Ordering::Relaxed) {
            break;
        }
        let done = records.iter().any(|r| {
            matches!(r, Record::DegreeComplete(d) if d.stratum == name && d.degree == degree && d.source == spec.source.name())
        });
        if done {
            log::info!("{name} degree {degree}: already complete");
            continue;
        }
        let mut known = HashSet::new();
        let mut known_keys = HashSet::new();
        for r in &records {
            match r {
                Record::Orbit(o) if o.stratum == name && o.degree == degree => {
                    known_keys.insert(o.key.clone());
                    for m in &o.members {
                        if let Ok(x) = parse_origami(m) {
                            known.insert(x.canonical_form());
                        }
                    }
                }
                Record::OrbitError(e) if e.stratum == name && e.degree == degree => {
                    known_keys.insert(e.key.clone());
                    if let Ok(x) = parse_origami(&e.key) {
                        known.insert(x.canonical_form());
                    }
                }
                _ => {}
            }
        }
        log::info!("{name} degree {degree}: searching ({} classes known)", known.len());
        let (tx, rx) = mpsc::channel::<Found>();
        let jobs = spec.jobs.max(1);
        let mut new_records = Vec::new();
        let mut errors = None;
        let (candidates, screened) = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|id| {
                    let tx = tx.clone();
                    let known = &known;
                    let stop = &stop;
                    scope.spawn(move || {
                        let mut w = Worker {
                            spec,
                            degree,
                            known,
                            stop,
                            tx,
                            candidates: 0,
                            screened: HashSet::new(),
                            handled: HashSet::new(),
                        };
                        w.run(id);
                        (w.candidates, w.screened)
                    })
                })
                .collect();
            drop(tx);
            // Single writer: records reach the database as they arrive.
            for found in rx {
                let record = match found {
                    Found::Orbit(r) => {
                        if r.degenerate {
                            log::info!(
                                "{name} degree {degree}: degenerate orbit of size {} at {}",
                                r.orbit_size,
                                r.key
                            );
                        }
                        Record::Orbit(r)
                    }
                    Found::Error(e) => Record::OrbitError(e),
                };
                let key = match &record {
                    Record::Orbit(r) => r.key.clone(),
                    Record::OrbitError(e) => e.key.clone(),
                    Record::DegreeComplete(_) => unreachable!(),
                };
                if !known_keys.insert(key) {
                    continue;
                }
                if let Some(p) = &spec.db {
                    if let Err(e) = db_write(p, std::slice::from_ref(&record)) {
                        errors.get_or_insert(e);
                    }
                }
                new_records.push(record);
            }
            let mut candidates = 0;
            let mut screened: HashSet<Origami> = HashSet::new();
            for h in handles {
                let (c, s) = h.join().expect("search worker panicked");
                candidates += c;
                screened.extend(s);
            }
            (candidates, screened.len() as u64)
        });
        if let Some(e) = errors {
            return Err(e);
        }
        records.extend(new_records);
        if stop.load(Ordering::Relaxed) {
            log::info!("{name} degree {degree}: stopped at the first degenerate orbit");
            break;
        }
        let mine: Vec<&Record> = records.iter().filter(|r| r.stratum() == name && r.degree() == degree).collect();
        let orbits = mine.iter().filter(|r| matches!(r, Record::Orbit(_))).count() as u64;
        let degenerate = mine.iter().filter(|r| matches!(r, Record::Orbit(o) if o.degenerate)).count() as u64;
        let errs = mine.iter().filter(|r| matches!(r, Record::OrbitError(_))).count() as u64;
        let complete = Record::DegreeComplete(DegreeRecord {
            stratum: name.clone(),
            degree,
            source: spec.source.name().into(),
            candidates,
            screened,
            orbits,
            degenerate,
            errors: errs,
        });
        if let Some(p) = &spec.db {
            db_write(p, std::slice::from_ref(&complete))?;
        }
        log::info!("{name} degree {degree}: {candidates} candidates, {screened} screened classes, {orbits} orbits, {degenerate} degenerate");
        records.push(complete);
    }
    Ok(SearchReport::from_records(&records, &spec.stratum, spec.n_min, spec.n_max))
}
