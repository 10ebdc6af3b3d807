"""Multiple-choice QA synthesis from solved spatiotemporal relations.

For every scene the generator enumerates frame pairs whose motion clears a
task-specific floor, solves the ground truth, renders a question from a fixed
template, builds the option list (a distractor band for numeric tasks, a
shuffled label set for categorical ones), attaches the world-frame anchors
needed for reward scoring, and caps the per-video yield.

All randomness is derived per item from (seed, video_id, task, frame pair,
object), so output is byte-identical regardless of processing order.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import json
from dataclasses import dataclass, fields

import numpy as np

from . import relations
from .scene import SceneMetadata, SceneValidationError, camera_center, object_centroid, validate_scene


class TaskKind(str, enum.Enum):
    CAM_ABS_DIS = "cam_abs_dis"
    CAM_REL_DIR = "cam_rel_dir"
    OBJ_ABS_DIS = "obj_abs_dis"
    OBJCAM_ABS_DIS = "objcam_abs_dis"
    OBJCAM_REL_DIS = "objcam_rel_dis"
    OBJCAM_REL_DIR_LATERAL = "objcam_rel_dir_lateral"
    OBJCAM_REL_DIR_LONGITUDINAL = "objcam_rel_dir_longitudinal"


NUMERIC_TASKS = (TaskKind.CAM_ABS_DIS, TaskKind.OBJ_ABS_DIS, TaskKind.OBJCAM_ABS_DIS)

CAMERA_ONLY_TASKS = (TaskKind.CAM_ABS_DIS, TaskKind.CAM_REL_DIR)

# The benchmark pools the two object-camera direction variants into one subtask.
BENCHMARK_SUBTASKS = (
    "cam_abs_dis",
    "cam_rel_dir",
    "obj_abs_dis",
    "objcam_abs_dis",
    "objcam_rel_dis",
    "objcam_rel_dir",
)

_LABEL_OPTIONS = {
    TaskKind.CAM_REL_DIR: ["right", "left", "up", "down", "forward", "backward"],
    TaskKind.OBJCAM_REL_DIS: ["closer", "farther"],
    TaskKind.OBJCAM_REL_DIR_LATERAL: ["left", "right"],
    TaskKind.OBJCAM_REL_DIR_LONGITUDINAL: ["closer", "farther"],
}

_QUESTION_TEMPLATES = {
    TaskKind.CAM_ABS_DIS: (
        "Approximately how far (in meters) did the camera move between "
        "frame {i} and frame {j}?"
    ),
    TaskKind.CAM_REL_DIR: (
        "During the sequence between frame {i} and frame {j}, what was the primary "
        "consistent translation of the camera's movement relative to its position "
        "at the start?"
    ),
    TaskKind.OBJ_ABS_DIS: (
        "Approximately how far (in meters) did {obj} move between frame {i} and frame {j}?"
    ),
    TaskKind.OBJCAM_ABS_DIS: (
        "What is the approximate distance (in meters) between the camera (or the "
        "observer filming) in frame {i} and the nearest point of the {obj} in frame {j}?"
    ),
    TaskKind.OBJCAM_REL_DIS: (
        "During the sequence between frame {i} and frame {j}, is the distance between "
        "{obj} and the camera (or the observer filming) getting closer or farther away?"
    ),
    TaskKind.OBJCAM_REL_DIR_LATERAL: (
        "During the sequence between frame {i} and frame {j}, is {obj} getting left or "
        "right from the camera (or the observer filming) relative to camera's position "
        "at the start?"
    ),
    TaskKind.OBJCAM_REL_DIR_LONGITUDINAL: (
        "During the sequence between frame {i} and frame {j}, is {obj} getting closer or "
        "farther away from the camera (or the observer filming) relative to camera's "
        "position at the start?"
    ),
}


class DegenerateValueError(ValueError):
    """True value too small to carry a multiple-choice distractor band."""


class InsufficientPairsError(ValueError):
    """A benchmark subtask has fewer candidate pairs than requested."""

    def __init__(self, subtask: str, have: int, want: int):
        self.subtask = subtask
        super().__init__(f"subtask {subtask!r} has {have} candidates, need {want}")


@dataclass
class GenerationConfig:
    seed: int = 0
    option_count: int = 4
    distractor_lo: float = 0.25   # fraction of the true value
    distractor_hi: float = 1.75
    min_option_separation: float = 0.10  # fraction of the true value
    per_video_cap: int = 20
    tau: float = relations.DEFAULT_TAU
    min_motion: float = relations.DEFAULT_MIN_MOTION
    value_rounding: int = 1       # decimal places in numeric option text
    frame_stride: int = 1         # subsample candidate frames before pairing
    keep_not_moving: bool = False  # retain rel-dis pairs classified "not moving"
    direction_mode: str = "translation"  # camera_relative_direction mode

    def __post_init__(self):
        if not (0 < self.distractor_lo < 1 < self.distractor_hi):
            raise ValueError("distractor band must satisfy 0 < lo < 1 < hi")
        if self.option_count < 2:
            raise ValueError("option_count must be >= 2")
        if self.per_video_cap < 1:
            raise ValueError("per_video_cap must be >= 1")
        if self.frame_stride < 1:
            raise ValueError("frame_stride must be >= 1")


@dataclass
class GroundTruthAnchors:
    """World-frame camera centers (and object centroids, when the question
    has an object) at the question's start and end frames."""

    camera_centers: np.ndarray                 # (2, 3)
    object_centroids: np.ndarray | None = None  # (2, 3) or None

    def __post_init__(self):
        self.camera_centers = np.asarray(self.camera_centers, dtype=float).reshape(2, 3)
        if self.object_centroids is not None:
            self.object_centroids = np.asarray(self.object_centroids, dtype=float).reshape(2, 3)

    def to_dict(self) -> dict:
        return {
            "camera_centers": self.camera_centers.tolist(),
            "object_centroids": None
            if self.object_centroids is None
            else self.object_centroids.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GroundTruthAnchors":
        return cls(doc["camera_centers"], doc.get("object_centroids"))


@dataclass
class QAPair:
    id: str
    video_id: str
    task: TaskKind
    frame_start: int
    frame_end: int
    object_id: str | None
    question: str
    options: list
    answer_index: int
    gt_value: float | str
    gt_anchors: GroundTruthAnchors

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "video_id": self.video_id,
            "task": self.task.value,
            "frame_start": self.frame_start,
            "frame_end": self.frame_end,
            "object_id": self.object_id,
            "question": self.question,
            "options": list(self.options),
            "answer_index": self.answer_index,
            "gt_value": self.gt_value,
            "gt_anchors": self.gt_anchors.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "QAPair":
        return cls(
            id=doc["id"],
            video_id=doc["video_id"],
            task=TaskKind(doc["task"]),
            frame_start=doc["frame_start"],
            frame_end=doc["frame_end"],
            object_id=doc["object_id"],
            question=doc["question"],
            options=list(doc["options"]),
            answer_index=doc["answer_index"],
            gt_value=doc["gt_value"],
            gt_anchors=GroundTruthAnchors.from_dict(doc["gt_anchors"]),
        )


@dataclass
class BenchmarkManifest:
    """Question ids selected per benchmark subtask."""

    per_subtask: int
    question_ids: dict  # subtask name -> list of QAPair ids

    @property
    def size(self) -> int:
        return sum(len(ids) for ids in self.question_ids.values())

    def to_dict(self) -> dict:
        return {"per_subtask": self.per_subtask, "subtasks": self.question_ids}

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchmarkManifest":
        return cls(doc["per_subtask"], doc["subtasks"])


def benchmark_subtask(task: TaskKind) -> str:
    if task in (TaskKind.OBJCAM_REL_DIR_LATERAL, TaskKind.OBJCAM_REL_DIR_LONGITUDINAL):
        return "objcam_rel_dir"
    return task.value


def _item_rng(seed: int, *parts) -> np.random.Generator:
    """Deterministic per-item generator, independent of processing order."""
    key = "\x1f".join([str(seed), *[str(p) for p in parts]]).encode()
    digest = hashlib.sha256(key).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))


def render_question(
    task: TaskKind, frame_start: int, frame_end: int, object_description: str | None = None
) -> str:
    """Fill the task's question template; frames render as "frame {index}"."""
    needs_object = task not in CAMERA_ONLY_TASKS
    if needs_object and not object_description:
        raise ValueError(f"task {task.value} requires an object description")
    return _QUESTION_TEMPLATES[task].format(i=frame_start, j=frame_end, obj=object_description)


def _display_places(true_value: float, config: GenerationConfig) -> int:
    """Decimal places for option text; bumped when the distractor band is too
    narrow to hold option_count distinct rounded values."""
    places = config.value_rounding
    band = (config.distractor_hi - config.distractor_lo) * true_value
    while band < config.option_count * max(
        config.min_option_separation * true_value, 10.0 ** -places
    ):
        places += 1
    return places


def generate_numeric_mcq(
    true_value: float, rng: np.random.Generator, config: GenerationConfig
) -> tuple[list, int]:
    """Build option texts for a numeric question.

    The true value appears exactly once (rounded for display); distractors are
    drawn uniformly from [lo*v, hi*v] and re-drawn until the rounded candidate
    stays inside the band and keeps min_option_separation*v from every option
    already chosen. Option order is then shuffled.
    """
    if true_value < config.min_motion:
        raise DegenerateValueError(
            f"true value {true_value} below the motion floor {config.min_motion}"
        )
    places = _display_places(true_value, config)
    lo = config.distractor_lo * true_value
    hi = config.distractor_hi * true_value
    separation = config.min_option_separation * true_value

    values = [round(true_value, places)]
    while len(values) < config.option_count:
        for _ in range(10_000):
            candidate = round(float(rng.uniform(lo, hi)), places)
            if candidate < lo or candidate > hi:
                continue
            if all(abs(candidate - v) >= separation - 1e-12 for v in values):
                values.append(candidate)
                break
        else:
            raise DegenerateValueError(
                f"could not place {config.option_count} options around {true_value}"
            )

    order = rng.permutation(config.option_count)
    options = [f"{values[k]:.{places}f}" for k in order]
    answer_index = int(np.argwhere(order == 0)[0, 0])
    return options, answer_index


def _solve(scene: SceneMetadata, task: TaskKind, m: int | None, i: int, j: int,
           config: GenerationConfig):
    """Ground truth for one (task, pair); returns (gt_value, informative)."""
    if task is TaskKind.CAM_ABS_DIS:
        value = relations.camera_absolute_distance(scene, i, j)
        return value, value > config.min_motion
    if task is TaskKind.CAM_REL_DIR:
        label, _ = relations.camera_relative_direction(
            scene, i, j, min_motion=config.min_motion, mode=config.direction_mode
        )
        return label.value, label is not relations.DirectionLabel.NONE
    if task is TaskKind.OBJ_ABS_DIS:
        value = relations.object_absolute_distance(scene, m, i, j)
        return value, value > config.min_motion
    if task is TaskKind.OBJCAM_ABS_DIS:
        value = relations.object_camera_absolute_distance(scene, m, i, j)
        return value, value > config.min_motion
    if task is TaskKind.OBJCAM_REL_DIS:
        label, _ = relations.object_camera_relative_distance(scene, m, i, j, tau=config.tau)
        informative = label is not relations.RelativeMotionLabel.NOT_MOVING
        return label.value, informative or config.keep_not_moving
    if task is TaskKind.OBJCAM_REL_DIR_LATERAL:
        shift = relations.object_camera_relative_direction(scene, m, i, j, tau=config.tau)
        return shift.lateral.value, shift.lateral is not relations.LateralLabel.NONE
    if task is TaskKind.OBJCAM_REL_DIR_LONGITUDINAL:
        shift = relations.object_camera_relative_direction(scene, m, i, j, tau=config.tau)
        return shift.longitudinal.value, shift.longitudinal is not relations.LongitudinalLabel.NONE
    raise ValueError(f"unknown task {task!r}")


def enumerate_frame_pairs(
    scene: SceneMetadata, task: TaskKind, config: GenerationConfig
) -> list:
    """Ordered (i, j, object_id) candidates whose quantity clears the floor.

    Object tasks require the object present at both frames. Frames are taken
    every ``frame_stride`` before pairing.
    """
    frames = range(0, scene.frame_count, config.frame_stride)
    pairs = list(itertools.combinations(frames, 2))
    out = []
    if task in CAMERA_ONLY_TASKS:
        for i, j in pairs:
            _, informative = _solve(scene, task, None, i, j, config)
            if informative:
                out.append((i, j, None))
        return out
    for m, track in enumerate(scene.objects):
        for i, j in pairs:
            if not (track.present_at(i) and track.present_at(j)):
                continue
            _, informative = _solve(scene, task, m, i, j, config)
            if informative:
                out.append((i, j, track.object_id))
    return out


def _label_options(task: TaskKind, gt_label: str, rng: np.random.Generator,
                   config: GenerationConfig) -> tuple[list, int]:
    labels = list(_LABEL_OPTIONS[task])
    if task is TaskKind.OBJCAM_REL_DIS and config.keep_not_moving:
        labels.append("not moving")
    order = rng.permutation(len(labels))
    options = [labels[k] for k in order]
    return options, options.index(gt_label)


def _make_pair(scene: SceneMetadata, task: TaskKind, i: int, j: int,
               object_id: str | None, config: GenerationConfig) -> QAPair:
    rng = _item_rng(config.seed, scene.video_id, task.value, i, j, object_id)
    m = scene.object_index(object_id) if object_id is not None else None
    gt_value, _ = _solve(scene, task, m, i, j, config)

    if task in NUMERIC_TASKS:
        options, answer_index = generate_numeric_mcq(gt_value, rng, config)
    else:
        options, answer_index = _label_options(task, gt_value, rng, config)

    description = scene.objects[m].description if m is not None else None
    question = render_question(task, i, j, description)

    centers = np.stack([
        camera_center(scene.cameras[i]),
        camera_center(scene.cameras[j]),
    ])
    centroids = None
    if m is not None:
        centroids = np.stack([
            object_centroid(scene.objects[m], i),
            object_centroid(scene.objects[m], j),
        ])
    anchors = GroundTruthAnchors(centers, centroids)

    suffix = f"/{object_id}" if object_id is not None else ""
    qa_id = f"{scene.video_id}/{task.value}/{i}-{j}{suffix}"
    return QAPair(
        id=qa_id,
        video_id=scene.video_id,
        task=task,
        frame_start=i,
        frame_end=j,
        object_id=object_id,
        question=question,
        options=options,
        answer_index=answer_index,
        gt_value=gt_value,
        gt_anchors=anchors,
    )


def generate_for_scene(scene: SceneMetadata, config: GenerationConfig) -> list:
    """All QA pairs for one scene, capped per video.

    Candidates across every task kind are built in a fixed order, then
    downsampled uniformly at random to per_video_cap with a video-derived
    generator, so results depend only on (scene, config.seed).
    """
    report = validate_scene(scene)
    if not report.valid:
        raise SceneValidationError(report)
    if scene.frame_count < 2:
        return []

    candidates = []
    for task in TaskKind:
        for i, j, object_id in enumerate_frame_pairs(scene, task, config):
            candidates.append(_make_pair(scene, task, i, j, object_id, config))

    if len(candidates) > config.per_video_cap:
        rng = _item_rng(config.seed, scene.video_id, "per-video-cap")
        keep = rng.choice(len(candidates), size=config.per_video_cap, replace=False)
        candidates = [candidates[k] for k in sorted(keep)]
    return candidates


def balance_benchmark(
    pairs: list,
    per_subtask: int,
    rng: np.random.Generator,
    per_video_cap: int | None = None,
) -> BenchmarkManifest:
    """Uniform random sample of per_subtask questions for each subtask.

    The two object-camera direction task kinds share one subtask pool. When
    per_video_cap is given, no video contributes more than that many questions
    to the whole manifest.
    """
    pools = {name: [] for name in BENCHMARK_SUBTASKS}
    for qa in pairs:
        pools[benchmark_subtask(qa.task)].append(qa)

    video_counts = {}
    question_ids = {}
    for name in BENCHMARK_SUBTASKS:
        pool = pools[name]
        order = rng.permutation(len(pool)) if pool else []
        chosen = []
        for k in order:
            qa = pool[k]
            if per_video_cap is not None and video_counts.get(qa.video_id, 0) >= per_video_cap:
                continue
            chosen.append(qa.id)
            video_counts[qa.video_id] = video_counts.get(qa.video_id, 0) + 1
            if len(chosen) == per_subtask:
                break
        if len(chosen) < per_subtask:
            raise InsufficientPairsError(name, len(chosen), per_subtask)
        question_ids[name] = chosen
    return BenchmarkManifest(per_subtask, question_ids)


# --- JSONL / config plumbing --------------------------------------------------


def save_qa_pairs(pairs: list, path):
    with open(path, "w") as f:
        for qa in pairs:
            f.write(json.dumps(qa.to_dict()) + "\n")


def load_qa_pairs(path) -> list:
    pairs = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                pairs.append(QAPair.from_dict(json.loads(line)))
    return pairs


def save_manifest(manifest: BenchmarkManifest, path):
    with open(path, "w") as f:
        json.dump(manifest.to_dict(), f, indent=2)
        f.write("\n")


def load_manifest(path) -> BenchmarkManifest:
    with open(path) as f:
        return BenchmarkManifest.from_dict(json.load(f))


def config_from_file(path) -> GenerationConfig:
    """Load a flat key/value JSON document mirroring GenerationConfig fields."""
    with open(path) as f:
        doc = json.load(f)
    known = {f.name for f in fields(GenerationConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown generation config keys: {sorted(unknown)}")
    return GenerationConfig(**doc)
