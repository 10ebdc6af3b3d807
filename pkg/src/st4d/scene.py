"""4D scene metadata: camera pose tracks, object point tracks, validation, JSON I/O.

Conventions used throughout the package:
  * right-handed world frame, all coordinates in meters;
  * camera extrinsics are world-to-camera, i.e. a world point ``x`` maps to
    camera coordinates ``R @ x + t``, so the camera center in world
    coordinates is ``-R.T @ t``;
  * camera-local axes follow +X right, +Y down, +Z forward.

A scene is immutable after construction; every function here is pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

# Loose enough for poses round-tripped through decimal text, tight enough to
# reject scaled or sheared matrices.
ROTATION_TOL = 1e-6


class InvalidPoseError(ValueError):
    """Camera pose with non-finite entries."""


class MissingObjectError(LookupError):
    """Object has no (non-empty) point set at the requested frame."""


class SceneFormatError(ValueError):
    """Scene file does not match the schema; message names the JSON path."""


class SceneValidationError(ValueError):
    """Scene failed semantic validation (see attached report)."""

    def __init__(self, report: "SceneValidationReport"):
        self.report = report
        first = report.error_issues()[0] if report.error_issues() else None
        super().__init__(f"scene is invalid: {first}")


def _as_vec3(value, name: str = "vector") -> np.ndarray:
    v = np.asarray(value, dtype=float).reshape(3)
    return v


@dataclass
class CameraPose:
    """World-to-camera extrinsics: rotation R (3x3, row-major) and translation t."""

    R: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        self.R = np.asarray(self.R, dtype=float).reshape(3, 3)
        self.t = _as_vec3(self.t, "t")

    def __eq__(self, other):
        if not isinstance(other, CameraPose):
            return NotImplemented
        return np.array_equal(self.R, other.R) and np.array_equal(self.t, other.t)


@dataclass
class ObjectTrack:
    """Per-frame point sets for one tracked object.

    ``points_per_frame`` has one entry per scene frame: either None (object
    not observed at that frame) or an (N, 3) float array with N >= 1.
    """

    object_id: str
    description: str
    points_per_frame: list

    def __post_init__(self):
        converted = []
        for pts in self.points_per_frame:
            if pts is None:
                converted.append(None)
            else:
                converted.append(np.asarray(pts, dtype=float).reshape(-1, 3))
        self.points_per_frame = converted

    def present_at(self, frame: int) -> bool:
        pts = self.points_per_frame[frame]
        return pts is not None and len(pts) > 0

    def __eq__(self, other):
        if not isinstance(other, ObjectTrack):
            return NotImplemented
        if self.object_id != other.object_id or self.description != other.description:
            return False
        if len(self.points_per_frame) != len(other.points_per_frame):
            return False
        for a, b in zip(self.points_per_frame, other.points_per_frame):
            if (a is None) != (b is None):
                return False
            if a is not None and not np.array_equal(a, b):
                return False
        return True


@dataclass
class SceneMetadata:
    """One video's 4D metadata: K camera poses and M object point tracks."""

    video_id: str
    frame_count: int
    cameras: list
    objects: list

    def object_index(self, object_id: str) -> int:
        for m, track in enumerate(self.objects):
            if track.object_id == object_id:
                return m
        raise KeyError(f"no object with id {object_id!r}")

    def __eq__(self, other):
        if not isinstance(other, SceneMetadata):
            return NotImplemented
        return (
            self.video_id == other.video_id
            and self.frame_count == other.frame_count
            and self.cameras == other.cameras
            and self.objects == other.objects
        )


@dataclass
class SceneValidationReport:
    """Validation outcome: a list of (severity, locus, message) issues."""

    issues: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.error_issues()

    def error_issues(self) -> list:
        return [issue for issue in self.issues if issue[0] == "error"]


def camera_center(pose: CameraPose) -> np.ndarray:
    """World-frame optical center of a world-to-camera pose: -R.T @ t."""
    if not (np.isfinite(pose.R).all() and np.isfinite(pose.t).all()):
        raise InvalidPoseError("pose contains non-finite values")
    return -pose.R.T @ pose.t


def object_centroid(track: ObjectTrack, frame: int) -> np.ndarray:
    """Arithmetic mean of the object's point set at ``frame``."""
    if frame < 0 or frame >= len(track.points_per_frame):
        raise IndexError(f"frame {frame} out of range for track {track.object_id!r}")
    pts = track.points_per_frame[frame]
    if pts is None or len(pts) == 0:
        raise MissingObjectError(f"object {track.object_id!r} absent at frame {frame}")
    return pts.mean(axis=0)


def rotation_residuals(R: np.ndarray) -> tuple[float, float]:
    """Max-norm orthonormality residual ||R^T R - I||_inf and |det(R) - 1|."""
    ortho = float(np.max(np.abs(R.T @ R - np.eye(3))))
    det = abs(float(np.linalg.det(R)) - 1.0)
    return ortho, det


def validate_scene(scene: SceneMetadata) -> SceneValidationReport:
    """Check structural and numeric invariants; never raises, never mutates."""
    issues = []

    if scene.frame_count < 1:
        issues.append(("error", "scene", f"frame_count must be positive, got {scene.frame_count}"))
    elif scene.frame_count < 2:
        issues.append(("warning", "scene", "frame_count < 2: no frame pairs available for QA"))

    if len(scene.cameras) != scene.frame_count:
        issues.append(
            ("error", "cameras", f"camera count {len(scene.cameras)} != frame_count {scene.frame_count}")
        )

    for i, pose in enumerate(scene.cameras):
        locus = f"camera[{i}]"
        if not (np.isfinite(pose.R).all() and np.isfinite(pose.t).all()):
            issues.append(("error", locus, "non-finite pose values"))
            continue
        ortho, det = rotation_residuals(pose.R)
        if ortho > ROTATION_TOL:
            issues.append(("error", locus, f"rotation not orthonormal (residual {ortho:.3g})"))
        if det > ROTATION_TOL:
            issues.append(("error", locus, f"rotation determinant off by {det:.3g}"))

    for track in scene.objects:
        locus = f"object[{track.object_id}]"
        if len(track.points_per_frame) != scene.frame_count:
            issues.append(
                ("error", locus,
                 f"track length {len(track.points_per_frame)} != frame_count {scene.frame_count}")
            )
        for i, pts in enumerate(track.points_per_frame):
            if pts is None:
                continue
            if len(pts) == 0:
                issues.append(("error", f"{locus}.points[{i}]", "present point set is empty"))
            elif not np.isfinite(pts).all():
                issues.append(("error", f"{locus}.points[{i}]", "non-finite point coordinates"))

    return SceneValidationReport(issues)


def apply_rigid_transform(scene: SceneMetadata, rotation: np.ndarray, translation) -> SceneMetadata:
    """Re-express the scene in a rigidly transformed world frame.

    World points move as p' = Q p + b. Extrinsics compose as R' = R Q^T,
    t' = t - R Q^T b, which keeps every camera-local observation identical
    (R' p' + t' == R p + t) and moves camera centers as c' = Q c + b.
    """
    Q = np.asarray(rotation, dtype=float).reshape(3, 3)
    b = _as_vec3(translation)
    cameras = [CameraPose(pose.R @ Q.T, pose.t - pose.R @ Q.T @ b) for pose in scene.cameras]
    objects = []
    for track in scene.objects:
        pts = [None if p is None else p @ Q.T + b for p in track.points_per_frame]
        objects.append(ObjectTrack(track.object_id, track.description, pts))
    return SceneMetadata(scene.video_id, scene.frame_count, cameras, objects)


# --- JSON serialization ------------------------------------------------------
#
# Scene file schema (one JSON document):
#   {"video_id": str, "frame_count": int,
#    "cameras": [{"R": [9 floats row-major], "t": [3 floats]}, ...],
#    "objects": [{"object_id": str, "description": str,
#                 "points": [null | [[x, y, z], ...], ...]}, ...]}


def _expect(condition: bool, path: str, message: str):
    if not condition:
        raise SceneFormatError(f"{path}: {message}")


def scene_to_dict(scene: SceneMetadata) -> dict:
    return {
        "video_id": scene.video_id,
        "frame_count": scene.frame_count,
        "cameras": [
            {"R": pose.R.reshape(9).tolist(), "t": pose.t.tolist()} for pose in scene.cameras
        ],
        "objects": [
            {
                "object_id": track.object_id,
                "description": track.description,
                "points": [None if p is None else p.tolist() for p in track.points_per_frame],
            }
            for track in scene.objects
        ],
    }


def scene_from_dict(doc: dict, path: str = "$") -> SceneMetadata:
    _expect(isinstance(doc, dict), path, "expected a JSON object")
    for key in ("video_id", "frame_count", "cameras", "objects"):
        _expect(key in doc, f"{path}.{key}", "missing required field")
    _expect(isinstance(doc["video_id"], str), f"{path}.video_id", "expected a string")
    _expect(isinstance(doc["frame_count"], int) and not isinstance(doc["frame_count"], bool),
            f"{path}.frame_count", "expected an integer")
    _expect(isinstance(doc["cameras"], list), f"{path}.cameras", "expected an array")
    _expect(isinstance(doc["objects"], list), f"{path}.objects", "expected an array")

    cameras = []
    for i, cam in enumerate(doc["cameras"]):
        cpath = f"{path}.cameras[{i}]"
        _expect(isinstance(cam, dict), cpath, "expected an object")
        _expect("R" in cam and "t" in cam, cpath, "missing R or t")
        R, t = cam["R"], cam["t"]
        _expect(isinstance(R, list) and len(R) == 9, f"{cpath}.R", "expected 9 floats (row-major)")
        _expect(isinstance(t, list) and len(t) == 3, f"{cpath}.t", "expected 3 floats")
        _expect(all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in R + t),
                cpath, "R and t entries must be numbers")
        cameras.append(CameraPose(np.asarray(R, dtype=float).reshape(3, 3), t))

    objects = []
    for m, obj in enumerate(doc["objects"]):
        opath = f"{path}.objects[{m}]"
        _expect(isinstance(obj, dict), opath, "expected an object")
        for key in ("object_id", "description", "points"):
            _expect(key in obj, f"{opath}.{key}", "missing required field")
        _expect(isinstance(obj["points"], list), f"{opath}.points", "expected an array")
        points = []
        for i, frame_pts in enumerate(obj["points"]):
            ppath = f"{opath}.points[{i}]"
            if frame_pts is None:
                points.append(None)
                continue
            _expect(isinstance(frame_pts, list) and len(frame_pts) > 0, ppath,
                    "expected null or a non-empty array of [x, y, z] triples")
            for k, p in enumerate(frame_pts):
                _expect(isinstance(p, list) and len(p) == 3
                        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in p),
                        f"{ppath}[{k}]", "expected an [x, y, z] triple")
            points.append(np.asarray(frame_pts, dtype=float))
        objects.append(ObjectTrack(str(obj["object_id"]), str(obj["description"]), points))

    return SceneMetadata(doc["video_id"], doc["frame_count"], cameras, objects)


def save_scene(scene: SceneMetadata, path):
    """Write the scene as JSON; floats round-trip bit-exactly via repr."""
    with open(path, "w") as f:
        json.dump(scene_to_dict(scene), f)
        f.write("\n")


def load_scene(path) -> SceneMetadata:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise SceneFormatError(f"$: not valid JSON ({exc})") from exc
    return scene_from_dict(doc)
