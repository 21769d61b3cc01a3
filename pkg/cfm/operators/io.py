"""
Matrix and image IO
Dense matrices are read from CSV or the CFM1 little-endian binary format;
images are loaded with Pillow as grayscale arrays in [0, 1]
"""
import struct
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from PIL import Image

from ..core.errors import ProblemFileError

PathLike = Union[str, Path]

CFM1_MAGIC = b"CFM1"
CFM1_HEADER = struct.Struct("<4sQQ")

MATRIX_EXTENSIONS = {".csv", ".cfm", ".bin"}
IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg", ".gif", ".bmp", ".tif", ".tiff", ".pgm"}


def validate_path(path: PathLike, allowed: set) -> Path:
    """Check that a file exists and has one of the allowed extensions"""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(str(path))
    if path.suffix.lower() not in allowed:
        raise ProblemFileError(
            f"Invalid file type {path.suffix!r}. Allowed: {', '.join(sorted(allowed))}",
            {"path": str(path)},
        )
    return path


def save_matrix(path: PathLike, matrix: np.ndarray) -> Path:
    """Write a matrix as CSV (.csv) or CFM1 binary (anything else)"""
    path = Path(path)
    M = np.array(matrix, dtype=np.float64, ndmin=2)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == ".csv":
        np.savetxt(path, M, delimiter=",", fmt="%.17g")
    else:
        rows, cols = M.shape
        with open(path, "wb") as fh:
            fh.write(CFM1_HEADER.pack(CFM1_MAGIC, rows, cols))
            fh.write(np.ascontiguousarray(M, dtype="<f8").tobytes())
    return path


def load_matrix(path: PathLike) -> np.ndarray:
    """Read a matrix written by save_matrix (or any plain numeric CSV)"""
    path = validate_path(path, MATRIX_EXTENSIONS)
    if path.suffix.lower() == ".csv":
        try:
            return np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
        except ValueError as e:
            raise ProblemFileError(f"Failed to parse CSV matrix: {str(e)}", {"path": str(path)})
    data = path.read_bytes()
    if len(data) < CFM1_HEADER.size:
        raise ProblemFileError("CFM1 file is truncated", {"path": str(path)})
    magic, rows, cols = CFM1_HEADER.unpack_from(data)
    if magic != CFM1_MAGIC:
        raise ProblemFileError(f"bad magic {magic!r}, expected {CFM1_MAGIC!r}", {"path": str(path)})
    expected = CFM1_HEADER.size + 8 * rows * cols
    if len(data) != expected:
        raise ProblemFileError(
            f"CFM1 payload has {len(data)} bytes, header implies {expected}",
            {"path": str(path), "rows": rows, "cols": cols},
        )
    body = np.frombuffer(data, dtype="<f8", offset=CFM1_HEADER.size)
    return body.reshape(rows, cols).astype(np.float64)


def load_image(path: PathLike, size: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """Load a grayscale image as a float array with values in [0, 1]"""
    path = validate_path(path, IMAGE_EXTENSIONS)
    try:
        with Image.open(path) as img:
            img = img.convert("L")
            if size is not None:
                img = img.resize((size[1], size[0]))
            pixels = np.asarray(img, dtype=np.float64)
    except OSError as e:
        raise ProblemFileError(f"Failed to read image: {str(e)}", {"path": str(path)})
    return pixels / 255.0


def save_image(path: PathLike, pixels: np.ndarray) -> Path:
    """Write an array with values in [0, 1] as an 8-bit grayscale image"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.clip(np.round(np.asarray(pixels) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(data).save(path)
    return path
