//! Minimum number of depot dispensers or chargers for a fleet with arrival
//! times, dwell windows and service durations.
//!
//! Times are quantized to 0.01 h. A vehicle is released at its arrival and
//! must finish by `min(arrival + dwell, station_max_hours)`; service is
//! non-preemptive and each station serves one vehicle at a time.
//!
//! [`min_stations`] tries increasing station counts from an energetic lower
//! bound. Each count is settled by one of two exact searches: schedules built
//! in order of service start, or stations filled one at a time with maximal
//! sets of compatible vehicles. The first suits spread-out arrivals with
//! similar service times, the second suits tightly packed windows.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;

/// Ticks per hour.
pub const RESOLUTION: f64 = 100.0;

/// Largest instance the exhaustive oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 8;

const SEARCH_LIMIT: usize = 128;
const MEMO_LIMIT: usize = 1 << 20;
const INITIAL_BUDGET: u64 = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepotVehicle {
    pub id: String,
    pub arrival_h: f64,
    pub dwell_h: f64,
    pub required_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleetInstance {
    pub vehicles: Vec<DepotVehicle>,
    #[serde(default = "default_max_hours")]
    pub station_max_hours: f64,
}

fn default_max_hours() -> f64 {
    24.0
}

impl FleetInstance {
    pub fn new(vehicles: Vec<DepotVehicle>) -> Self {
        Self { vehicles, station_max_hours: 24.0 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.station_max_hours > 0.0) {
            return Err(Error::invalid("station_max_hours must be positive"));
        }
        for v in &self.vehicles {
            let ok = v.arrival_h.is_finite()
                && v.dwell_h.is_finite()
                && v.required_h.is_finite()
                && v.arrival_h >= 0.0
                && v.arrival_h < 24.0
                && v.dwell_h > 0.0
                && v.required_h >= 0.0;
            if !ok {
                return Err(Error::invalid(alloc::format!(
                    "vehicle `{}`: need 0 ≤ arrival < 24, dwell > 0, required ≥ 0",
                    v.id
                )));
            }
        }
        Ok(())
    }

    /// Integer release, processing time and deadline per vehicle.
    pub fn jobs(&self) -> Vec<Job> {
        let horizon = ticks(self.station_max_hours);
        self.vehicles
            .iter()
            .map(|v| Job {
                release: ticks(v.arrival_h),
                processing: ticks(v.required_h),
                deadline: ticks(v.arrival_h + v.dwell_h).min(horizon),
            })
            .collect()
    }

    /// Vehicles that cannot be served even with a dedicated station.
    pub fn infeasible_vehicles(&self) -> Vec<String> {
        self.jobs()
            .iter()
            .zip(&self.vehicles)
            .filter(|(j, _)| j.release + j.processing > j.deadline)
            .map(|(_, v)| v.id.clone())
            .collect()
    }
}

pub fn ticks(hours: f64) -> i64 {
    math::round(hours * RESOLUTION) as i64
}

pub fn hours(ticks: i64) -> f64 {
    ticks as f64 / RESOLUTION
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Job {
    pub release: i64,
    pub processing: i64,
    pub deadline: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub vehicle: usize,
    pub id: String,
    /// 1-based station number.
    pub station: u32,
    pub start_h: f64,
    pub end_h: f64,
}

impl Assignment {
    /// Waiting time between arrival and start of service.
    pub fn waiting_h(&self, instance: &FleetInstance) -> f64 {
        self.start_h - hours(ticks(instance.vehicles[self.vehicle].arrival_h))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub stations: u32,
    /// One entry per vehicle, in vehicle order.
    pub assignments: Vec<Assignment>,
}

impl Schedule {
    pub fn busy_hours(&self) -> f64 {
        self.assignments.iter().map(|a| a.end_h - a.start_h).sum()
    }

    /// Busy station-hours over available station-hours.
    pub fn utilization(&self, horizon_hours: f64) -> f64 {
        if self.stations == 0 || horizon_hours <= 0.0 {
            return 0.0;
        }
        self.busy_hours() / (self.stations as f64 * horizon_hours)
    }

    /// Busy intervals `(start_h, end_h, vehicle)` of one station, by start time.
    pub fn station_intervals(&self, station: u32) -> Vec<(f64, f64, usize)> {
        let mut v: Vec<_> = self
            .assignments
            .iter()
            .filter(|a| a.station == station)
            .map(|a| (a.start_h, a.end_h, a.vehicle))
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        v
    }
}

/// Energetic lower bound: for every interval `[t1, t2)`, the work that
/// must fall inside it divided by its length.
pub fn lower_bound(jobs: &[Job]) -> u32 {
    let mut starts: Vec<i64> = jobs.iter().flat_map(|j| [j.release, j.deadline - j.processing]).collect();
    let mut ends: Vec<i64> = jobs.iter().flat_map(|j| [j.deadline, j.release + j.processing]).collect();
    starts.sort_unstable();
    starts.dedup();
    ends.sort_unstable();
    ends.dedup();
    let mut best = u32::from(jobs.iter().any(|j| j.processing > 0));
    for &t1 in &starts {
        for &t2 in ends.iter().filter(|&&t2| t2 > t1) {
            let len = t2 - t1;
            let work: i64 = jobs
                .iter()
                .map(|j| {
                    let left = j.release + j.processing - t1;
                    let right = t2 - (j.deadline - j.processing);
                    j.processing.min(len).min(left).min(right).max(0)
                })
                .sum();
            let need = ((work + len - 1) / len) as u32;
            best = best.max(need);
        }
    }
    best
}

type Mask = u128;

fn bit(i: usize) -> Mask {
    1 << i
}

fn members(mut mask: Mask) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        (mask != 0).then(|| {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            i
        })
    })
}

/// Energetic check on the unserved vehicles: over every window, the work
/// that cannot fall outside it fits in the station time still open in it.
fn energetic_ok(jobs: &[Job], left: Mask, free: &[i64]) -> bool {
    let open = free[0];
    let earliest = |j: &Job| j.release.max(open);
    let mut starts: Vec<i64> = members(left).map(|i| earliest(&jobs[i])).chain(free.iter().copied()).collect();
    let mut ends: Vec<i64> = members(left).map(|i| jobs[i].deadline).collect();
    starts.sort_unstable();
    starts.dedup();
    ends.sort_unstable();
    ends.dedup();
    for &t1 in &starts {
        for &t2 in ends.iter().filter(|&&t2| t2 > t1) {
            let len = t2 - t1;
            let capacity: i64 = free.iter().map(|&f| (t2 - f.max(t1)).max(0)).sum();
            let work: i64 = members(left)
                .map(|i| {
                    let j = &jobs[i];
                    let left_part = earliest(j) + j.processing - t1;
                    let right_part = t2 - (j.deadline - j.processing);
                    j.processing.min(len).min(left_part).min(right_part).max(0)
                })
                .sum();
            if work > capacity {
                return false;
            }
        }
    }
    true
}

/// Builds schedules on `k` stations in order of service start. Each step
/// picks the next vehicle to start, as early as the stations and its
/// arrival allow, among those that could start before any other vehicle
/// could finish.
struct Search<'a> {
    jobs: &'a [Job],
    all: Mask,
    failed: BTreeSet<(Mask, i64, Vec<i64>)>,
    /// Station count the failure memo refers to.
    k: usize,
    nodes: u64,
    budget: u64,
    /// `(station slot, start)` per vehicle on success.
    placed: Vec<(usize, i64)>,
}

impl<'a> Search<'a> {
    fn new(jobs: &'a [Job]) -> Self {
        let all = (0..jobs.len()).fold(0, |m, i| m | bit(i));
        Self { jobs, all, failed: BTreeSet::new(), k: 0, nodes: 0, budget: 0, placed: vec![(0, 0); jobs.len()] }
    }

    fn run(&mut self, k: u32, budget: u64) -> Verdict {
        if self.k != k as usize {
            self.failed.clear();
            self.k = k as usize;
        }
        self.nodes = 0;
        self.budget = budget;
        let mut free: Vec<(i64, usize)> = (0..self.k).map(|slot| (0, slot)).collect();
        self.step(0, 0, &mut free)
    }

    /// `free` holds `(free_from, slot)` per station.
    fn step(&mut self, done: Mask, t: i64, free: &mut [(i64, usize)]) -> Verdict {
        let left = self.all & !done;
        if left == 0 {
            return Verdict::Feasible;
        }
        let jobs = self.jobs;
        let floor = members(left).map(|i| jobs[i].release).min().unwrap().max(t);
        let mut times: Vec<i64> = free.iter().map(|f| f.0.max(floor)).collect();
        times.sort_unstable();
        let key = (done, floor, times);
        if self.failed.contains(&key) {
            return Verdict::Infeasible;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Verdict::OutOfBudget;
        }
        let times = &key.2;
        let open = times[0];

        let start = |i: usize| jobs[i].release.max(open);
        let mut by_deadline: Vec<usize> = members(left).collect();
        by_deadline.sort_by_key(|&i| (jobs[i].deadline, i));
        let mut work = 0;
        let mut dead = false;
        for (n, &i) in by_deadline.iter().enumerate() {
            let j = jobs[i];
            if start(i) + j.processing > j.deadline {
                dead = true;
                break;
            }
            work += j.processing;
            let last = by_deadline.get(n + 1).is_none_or(|&x| jobs[x].deadline != j.deadline);
            if last && work > times.iter().map(|&f| (j.deadline - f).max(0)).sum::<i64>() {
                dead = true;
                break;
            }
        }
        if dead || !energetic_ok(jobs, left, times) {
            self.remember(key);
            return Verdict::Infeasible;
        }

        let finish = members(left).map(|i| start(i) + jobs[i].processing).min().unwrap();
        let mut candidates: Vec<usize> =
            members(left).filter(|&i| start(i) < finish || start(i) + jobs[i].processing == finish).collect();
        // Of two equal-length vehicles, the one that can start no later and
        // is due no later goes first.
        let dominated = |b: usize, cands: &[usize]| {
            cands.iter().any(|&a| {
                let (ja, jb) = (jobs[a], jobs[b]);
                a != b
                    && ja.processing == jb.processing
                    && start(a) <= start(b)
                    && ja.deadline <= jb.deadline
                    && (start(a), ja.deadline, a) < (start(b), jb.deadline, b)
            })
        };
        let all_candidates = candidates.clone();
        candidates.retain(|&b| !dominated(b, &all_candidates));
        candidates.sort_by_key(|&i| (jobs[i].deadline, start(i), i));

        for i in candidates {
            let s = start(i);
            let slot_pos = free
                .iter()
                .enumerate()
                .filter(|(_, f)| f.0 <= s)
                .min_by_key(|(_, f)| f.1)
                .map(|(p, _)| p)
                .expect("a station is free at the start time");
            let saved = free[slot_pos];
            free[slot_pos].0 = s + jobs[i].processing;
            self.placed[i] = (saved.1, s);
            let v = self.step(done | bit(i), s, free);
            free[slot_pos] = saved;
            if v != Verdict::Infeasible {
                return v;
            }
        }
        self.remember(key);
        Verdict::Infeasible
    }

    fn remember(&mut self, key: (Mask, i64, Vec<i64>)) {
        if self.failed.len() < MEMO_LIMIT {
            self.failed.insert(key);
        }
    }
}


/// Outcome of a budgeted search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Feasible,
    Infeasible,
    OutOfBudget,
}

/// Order on one station, or `None` if the vehicles in `set` cannot share it.
fn sequence(jobs: &[Job], set: Mask) -> Option<Vec<(usize, i64)>> {
    let mut order: Vec<usize> = members(set).collect();
    order.sort_by_key(|&i| (jobs[i].deadline, jobs[i].release, i));
    let mut out = Vec::with_capacity(order.len());
    let mut failed = BTreeSet::new();
    sequence_dfs(jobs, &order, 0, 0, &mut out, &mut failed).then_some(out)
}

fn sequence_dfs(
    jobs: &[Job],
    order: &[usize],
    done: Mask,
    t: i64,
    out: &mut Vec<(usize, i64)>,
    failed: &mut BTreeSet<(Mask, i64)>,
) -> bool {
    let pending: Vec<usize> = order.iter().copied().filter(|&i| done & bit(i) == 0).collect();
    if pending.is_empty() {
        return true;
    }
    if failed.contains(&(done, t)) {
        return false;
    }
    // Everything due by each deadline must fit after the earliest possible start.
    let (mut work, mut earliest) = (0, i64::MAX);
    for (k, &i) in pending.iter().enumerate() {
        let j = jobs[i];
        work += j.processing;
        earliest = earliest.min(t.max(j.release));
        let last_of_deadline = pending.get(k + 1).is_none_or(|&n| jobs[n].deadline != j.deadline);
        if last_of_deadline && earliest + work > j.deadline {
            failed.insert((done, t));
            return false;
        }
    }
    for (ci, &i) in pending.iter().enumerate() {
        let j = jobs[i];
        if pending[..ci].iter().any(|&o| jobs[o] == j) {
            continue;
        }
        let start = t.max(j.release);
        if start + j.processing > j.deadline {
            continue;
        }
        // Another vehicle fits entirely in the idle gap before `start`;
        // serving it there first is never worse.
        let gap_filler = pending.iter().any(|&k| {
            let o = jobs[k];
            k != i && o.processing > 0 && t.max(o.release) + o.processing <= start
        });
        if gap_filler {
            continue;
        }
        out.push((i, start));
        if sequence_dfs(jobs, order, done | bit(i), start + j.processing, out, failed) {
            return true;
        }
        out.pop();
    }
    failed.insert((done, t));
    false
}

/// Lower bound for the vehicles in `set`: the energetic bound, and the
/// count bound from how many of the shortest services one station can hold.
fn set_bound(jobs: &[Job], set: Mask) -> u32 {
    let sub: Vec<Job> = members(set).map(|i| jobs[i]).collect();
    if sub.is_empty() {
        return 0;
    }
    let first = sub.iter().map(|j| j.release).min().unwrap();
    let last = sub.iter().map(|j| j.deadline).max().unwrap();
    let mut sizes: Vec<i64> = sub.iter().map(|j| j.processing).collect();
    sizes.sort_unstable();
    let mut room = last - first;
    let per_station = sizes
        .iter()
        .take_while(|&&p| {
            room -= p;
            room >= 0
        })
        .count()
        .max(1);
    let by_count = sub.len().div_ceil(per_station) as u32;
    by_count.max(lower_bound(&sub))
}

/// Branch and bound over station contents: the hardest remaining vehicle is
/// given a station holding a maximal compatible set of remaining vehicles.
struct Packer<'a> {
    jobs: &'a [Job],
    fits: BTreeMap<Mask, bool>,
    /// Largest station count proven insufficient for a remaining set.
    failed: BTreeMap<Mask, u32>,
    nodes: u64,
    budget: u64,
    stations: Vec<Mask>,
}

impl<'a> Packer<'a> {
    fn new(jobs: &'a [Job]) -> Self {
        Self { jobs, fits: BTreeMap::new(), failed: BTreeMap::new(), nodes: 0, budget: 0, stations: Vec::new() }
    }

    fn run(&mut self, k: u32, budget: u64) -> Verdict {
        let all = (0..self.jobs.len()).fold(0, |m, i| m | bit(i));
        self.nodes = 0;
        self.budget = budget;
        self.stations.clear();
        self.cover(all, k)
    }

    /// Placement of every vehicle after a feasible run.
    fn placed(&self) -> Vec<(usize, i64)> {
        let mut stations = self.stations.clone();
        stations.sort_by_key(|s| s.trailing_zeros());
        let mut placed = vec![(0, 0); self.jobs.len()];
        for (m, &set) in stations.iter().enumerate() {
            for (i, start) in sequence(self.jobs, set).expect("station sets are feasible") {
                placed[i] = (m, start);
            }
        }
        placed
    }

    fn fits(&mut self, set: Mask) -> bool {
        if let Some(&f) = self.fits.get(&set) {
            return f;
        }
        let f = sequence(self.jobs, set).is_some();
        if self.fits.len() < MEMO_LIMIT {
            self.fits.insert(set, f);
        }
        f
    }

    fn mark_failed(&mut self, remaining: Mask, k: u32) {
        if self.failed.len() < MEMO_LIMIT || self.failed.contains_key(&remaining) {
            let e = self.failed.entry(remaining).or_insert(0);
            *e = (*e).max(k);
        }
    }

    /// Covers `remaining` with at most `k` stations, pushing each station's set.
    fn cover(&mut self, remaining: Mask, k: u32) -> Verdict {
        if remaining == 0 {
            return Verdict::Feasible;
        }
        if k == 0 || self.failed.get(&remaining).is_some_and(|&f| f >= k) {
            return Verdict::Infeasible;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Verdict::OutOfBudget;
        }
        if set_bound(self.jobs, remaining) > k {
            self.mark_failed(remaining, k);
            return Verdict::Infeasible;
        }
        let jobs = self.jobs;
        let pivot = members(remaining)
            .min_by_key(|&i| (-jobs[i].processing, jobs[i].deadline - jobs[i].release, i))
            .unwrap();
        let mut candidates: Vec<usize> =
            members(remaining & !bit(pivot)).filter(|&c| self.fits(bit(pivot) | bit(c))).collect();
        candidates.sort_by_key(|&i| (-jobs[i].processing, jobs[i].deadline, jobs[i].release, i));
        let v = self.extend(bit(pivot), &candidates, 0, 0, remaining, k);
        if v == Verdict::Infeasible {
            self.mark_failed(remaining, k);
        }
        v
    }

    fn extend(&mut self, set: Mask, candidates: &[usize], i: usize, skipped: Mask, remaining: Mask, k: u32) -> Verdict {
        let Some(&c) = candidates.get(i) else {
            // Only maximal sets: every vehicle left out must no longer fit.
            if members(skipped).any(|s| self.fits(set | bit(s))) {
                return Verdict::Infeasible;
            }
            let v = self.cover(remaining & !set, k - 1);
            if v == Verdict::Feasible {
                self.stations.push(set);
            }
            return v;
        };
        // Identical vehicles are taken in order: once one is left out, so are the rest.
        let twin_skipped = i > 0 && {
            let prev = candidates[i - 1];
            self.jobs[prev] == self.jobs[c] && skipped & bit(prev) != 0
        };
        if twin_skipped {
            return self.extend(set, candidates, i + 1, skipped | bit(c), remaining, k);
        }
        if !self.fits(set | bit(c)) {
            return self.extend(set, candidates, i + 1, skipped, remaining, k);
        }
        match self.extend(set | bit(c), candidates, i + 1, skipped, remaining, k) {
            Verdict::Infeasible => self.extend(set, candidates, i + 1, skipped | bit(c), remaining, k),
            v => v,
        }
    }
}

fn build_schedule(instance: &FleetInstance, jobs: &[Job], placed: &[(usize, i64)]) -> Schedule {
    // Number stations by the first vehicle (in vehicle order) they serve.
    let mut renumber: Vec<Option<u32>> = Vec::new();
    let mut next = 0;
    let mut assignments = Vec::with_capacity(jobs.len());
    for (i, (&(machine, start), job)) in placed.iter().zip(jobs).enumerate() {
        if renumber.len() <= machine {
            renumber.resize(machine + 1, None);
        }
        let station = *renumber[machine].get_or_insert_with(|| {
            next += 1;
            next
        });
        assignments.push(Assignment {
            vehicle: i,
            id: instance.vehicles[i].id.clone(),
            station,
            start_h: hours(start),
            end_h: hours(start + job.processing),
        });
    }
    Schedule { stations: next, assignments }
}

/// A feasible schedule using the fewest stations.
pub fn min_stations(instance: &FleetInstance) -> Result<Schedule> {
    instance.validate()?;
    let bad = instance.infeasible_vehicles();
    if !bad.is_empty() {
        return Err(Error::Infeasible(bad));
    }
    let jobs = instance.jobs();
    if jobs.is_empty() {
        return Ok(Schedule { stations: 0, assignments: Vec::new() });
    }
    if jobs.len() > SEARCH_LIMIT {
        return Err(Error::TooLarge { size: jobs.len(), limit: SEARCH_LIMIT });
    }
    let mut chrono = Search::new(&jobs);
    let mut packer = Packer::new(&jobs);
    let mut k = lower_bound(&jobs).max(1);
    // The two searches are each exact; they take turns with a doubling node
    // budget and the first to settle a station count decides it.
    let placed = 'outer: loop {
        let mut budget = INITIAL_BUDGET;
        loop {
            match chrono.run(k, budget) {
                Verdict::Feasible => break 'outer chrono.placed.clone(),
                Verdict::Infeasible => break,
                Verdict::OutOfBudget => {}
            }
            match packer.run(k, budget) {
                Verdict::Feasible => break 'outer packer.placed(),
                Verdict::Infeasible => break,
                Verdict::OutOfBudget => {}
            }
            budget = budget.saturating_mul(2);
        }
        k += 1;
    };
    Ok(build_schedule(instance, &jobs, &placed))
}

/// Whether the given vehicles can share one station.
fn single_station_feasible(jobs: &[Job], members: &mut [usize]) -> bool {
    fn permute(jobs: &[Job], members: &mut [usize], k: usize, t: i64) -> bool {
        if k == members.len() {
            return true;
        }
        for i in k..members.len() {
            members.swap(k, i);
            let j = jobs[members[k]];
            let end = t.max(j.release) + j.processing;
            if end <= j.deadline && permute(jobs, members, k + 1, end) {
                members.swap(k, i);
                return true;
            }
            members.swap(k, i);
        }
        false
    }
    permute(jobs, members, 0, 0)
}

/// Exhaustive optimum over every partition of vehicles into stations and
/// every service order within a station.
pub fn brute_force_min_stations(instance: &FleetInstance) -> Result<u32> {
    instance.validate()?;
    let n = instance.vehicles.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { size: n, limit: BRUTE_FORCE_LIMIT });
    }
    let bad = instance.infeasible_vehicles();
    if !bad.is_empty() {
        return Err(Error::Infeasible(bad));
    }
    if n == 0 {
        return Ok(0);
    }
    let jobs = instance.jobs();
    // Restricted growth strings enumerate set partitions without repeats.
    let mut best = n as u32;
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().max().unwrap() + 1;
        if (blocks as u32) < best {
            let ok = (0..blocks).all(|b| {
                let mut members: Vec<usize> = (0..n).filter(|&i| rgs[i] == b).collect();
                single_station_feasible(&jobs, &mut members)
            });
            if ok {
                best = blocks as u32;
            }
        }
        // Next restricted growth string.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(best);
            }
            let prefix_max = rgs[..i].iter().max().copied().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
            i -= 1;
        }
    }
}

/// Checks every scheduling constraint; returns the first violation.
pub fn verify(instance: &FleetInstance, schedule: &Schedule) -> core::result::Result<(), String> {
    let jobs = instance.jobs();
    if schedule.assignments.len() != jobs.len() {
        return Err(String::from("every vehicle must be assigned exactly once"));
    }
    for (i, (a, j)) in schedule.assignments.iter().zip(&jobs).enumerate() {
        let (s, e) = (ticks(a.start_h), ticks(a.end_h));
        if a.vehicle != i {
            return Err(alloc::format!("assignment {i} names vehicle {}", a.vehicle));
        }
        if a.station == 0 || a.station > schedule.stations {
            return Err(alloc::format!("vehicle {i} on unknown station {}", a.station));
        }
        if s < j.release || e - s != j.processing || e > j.deadline {
            return Err(alloc::format!("vehicle {i} served outside its window"));
        }
    }
    for st in 1..=schedule.stations {
        let iv = schedule.station_intervals(st);
        if iv.is_empty() {
            return Err(alloc::format!("station {st} is unused"));
        }
        for w in iv.windows(2) {
            if ticks(w[0].1) > ticks(w[1].0) {
                return Err(alloc::format!("vehicles {} and {} overlap on station {st}", w[0].2, w[1].2));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(rows: &[(f64, f64, f64)]) -> FleetInstance {
        FleetInstance::new(
            rows.iter()
                .enumerate()
                .map(|(i, &(a, t, r))| DepotVehicle { id: alloc::format!("v{}", i + 1), arrival_h: a, dwell_h: t, required_h: r })
                .collect(),
        )
    }

    #[test]
    fn small_examples() {
        let one = inst(&[(1.0, 2.0, 1.0)]);
        assert_eq!(min_stations(&one).unwrap().stations, 1);
        let same = inst(&[(2.0, 3.0, 3.0); 4]);
        assert_eq!(min_stations(&same).unwrap().stations, 4);
        let three = inst(&[(0.0, 8.0, 4.0), (0.0, 8.0, 4.0), (4.0, 4.0, 4.0)]);
        let s = min_stations(&three).unwrap();
        assert_eq!(s.stations, 2);
        verify(&three, &s).unwrap();
        assert_eq!(brute_force_min_stations(&three).unwrap(), 2);
        assert_eq!(min_stations(&inst(&[])).unwrap().stations, 0);
        assert_eq!(brute_force_min_stations(&inst(&[])).unwrap(), 0);
    }

    #[test]
    fn infeasible_vehicle_named() {
        let bad = inst(&[(0.0, 1.0, 0.5), (3.0, 1.0, 2.0)]);
        assert_eq!(min_stations(&bad), Err(Error::Infeasible(vec![String::from("v2")])));
        // Window clipped by the 24 h station limit.
        let late = inst(&[(23.0, 5.0, 2.0)]);
        assert!(matches!(min_stations(&late), Err(Error::Infeasible(_))));
    }

    #[test]
    fn utilization_ratio() {
        let s = min_stations(&inst(&[(0.0, 12.0, 12.0)])).unwrap();
        assert!((s.utilization(24.0) - 0.5).abs() < 1e-12);
        assert_eq!(Schedule { stations: 0, assignments: vec![] }.utilization(24.0), 0.0);
    }

    #[test]
    fn oracle_size_limit() {
        let big = inst(&[(0.0, 1.0, 0.1); 9]);
        assert!(matches!(brute_force_min_stations(&big), Err(Error::TooLarge { .. })));
    }
}
