#!/usr/bin/env python3
"""Builds the labeled detector corpus under tests/fixtures/.

Offline tool. Needs numpy, Pillow, scikit-image/matplotlib/scikit-learn sample
images and an OpenCV 4.x Python build (the reference detector). Its outputs are
committed; the C++ test suite never runs this script.

    PYTHONPATH=/path/to/opencv4 python3 scripts/make_corpus.py

Faces come from the scikit-image LFW subset plus two public-domain portraits
(astronaut, grace_hopper). Positives are composites of faces over natural
background crops; negatives are face-free sample photographs. The reference
labels are the detections of cv2.CascadeClassifier on the same Rec. 601 luma
image the engine computes, with matching parameters.
"""
import json
import os
import sys

import cv2
import numpy as np
from PIL import Image

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIX = os.path.join(ROOT, "tests", "fixtures")
CASCADE = os.path.join(ROOT, "data", "cascades", "haarcascade_frontalface_default.xml")

SK = "/usr/local/lib/python3.10/dist-packages/skimage/data/"
MPL = "/usr/local/lib/python3.10/dist-packages/matplotlib/mpl-data/sample_data/"
SKL = "/usr/local/lib/python3.10/dist-packages/sklearn/datasets/images/"

PARAMS = dict(scale_factor=1.1, min_neighbors=3, min_size=24)
SEED = 20140712


def load_rgb(path):
    return np.asarray(Image.open(path).convert("RGB"))


def luma(rgb):
    r, g, b = (rgb[..., i].astype(np.uint32) for i in range(3))
    return ((77 * r + 150 * g + 29 * b) >> 8).astype(np.uint8)


CLASSIFIER = cv2.CascadeClassifier(CASCADE)


def reference(rgb):
    gray = luma(rgb)
    hits = CLASSIFIER.detectMultiScale(
        gray,
        scaleFactor=PARAMS["scale_factor"],
        minNeighbors=PARAMS["min_neighbors"],
        minSize=(PARAMS["min_size"], PARAMS["min_size"]),
    )
    rects = [[int(v) for v in r] for r in hits] if len(hits) else []
    rects.sort(key=lambda r: (-r[2] * r[3], r[0], r[1]))
    return rects


def iou(a, b):
    x0, y0 = max(a[0], b[0]), max(a[1], b[1])
    x1, y1 = min(a[0] + a[2], b[0] + b[2]), min(a[1] + a[3], b[1] + b[3])
    inter = max(0, x1 - x0) * max(0, y1 - y0)
    return inter / float(a[2] * a[3] + b[2] * b[3] - inter)


def lfw_faces():
    raw = np.load(SK + "lfw_subset.npy")[:100]
    return [(f * 255).round().astype(np.uint8) for f in raw]


def face_patch(gray25, size, tint):
    big = cv2.resize(gray25, (size, size), interpolation=cv2.INTER_CUBIC)
    rgb = np.stack([big] * 3, axis=-1).astype(np.float32)
    rgb *= np.array(tint, dtype=np.float32)
    return np.clip(rgb, 0, 255).astype(np.uint8)


def backgrounds(rng, w, h):
    pools = [
        load_rgb(SK + "coffee.png"),
        load_rgb(SKL + "china.jpg"),
        load_rgb(SK + "rocket.jpg"),
        load_rgb(SK + "chelsea.png"),
        load_rgb(SK + "motorcycle_left.png"),
        load_rgb(SK + "hubble_deep_field.jpg"),
    ]
    while True:
        kind = rng.integers(0, 3)
        if kind == 0:
            src = pools[rng.integers(0, len(pools))]
            sh, sw = src.shape[:2]
            x = rng.integers(0, max(1, sw - w))
            y = rng.integers(0, max(1, sh - h))
            crop = src[y:y + h, x:x + w]
            if crop.shape[0] == h and crop.shape[1] == w:
                yield crop.copy()
                continue
        top = rng.integers(40, 200, size=3)
        bottom = rng.integers(40, 230, size=3)
        t = np.linspace(0.0, 1.0, h)[:, None, None]
        img = (top[None, None, :] * (1 - t) + bottom[None, None, :] * t)
        img = np.broadcast_to(img, (h, w, 3)).copy()
        if kind == 2:
            img += rng.normal(0, 6, size=img.shape)
        yield np.clip(img, 0, 255).astype(np.uint8)


def place(rng, w, h, sizes):
    boxes = []
    for s in sizes:
        for _ in range(200):
            x = int(rng.integers(8, w - s - 8))
            y = int(rng.integers(8, h - s - 8))
            box = [x, y, s, s]
            if all(
                x + s + 16 < b[0] or b[0] + b[2] + 16 < x or y + s + 16 < b[1] or b[1] + b[3] + 16 < y
                for b in boxes
            ):
                boxes.append(box)
                break
        else:
            return None
    return boxes


def clean(planted, ref):
    if len(planted) != len(ref):
        return False
    return all(max(iou(p, r) for r in ref) >= 0.4 for p in planted)


def write_png(path, rgb):
    Image.fromarray(rgb, "RGB").save(path, optimize=False)


def main():
    rng = np.random.default_rng(SEED)
    faces = lfw_faces()
    # Faces the reference finds on a neutral canvas.
    usable = []
    for i, f in enumerate(faces):
        canvas = np.full((200, 200, 3), 128, np.uint8)
        canvas[60:135, 60:135] = face_patch(f, 75, (1, 1, 1))
        if len(reference(canvas)) == 1:
            usable.append(i)

    corpus_dir = os.path.join(FIX, "corpus")
    os.makedirs(corpus_dir, exist_ok=True)
    for old in os.listdir(corpus_dir):
        if old.endswith(".png"):
            os.remove(os.path.join(corpus_dir, old))

    entries = []
    W, H = 480, 360
    bg = backgrounds(rng, W, H)
    n_pos = 0
    attempts = 0
    while n_pos < 22 and attempts < 500:
        attempts += 1
        count = int(rng.integers(1, 5))
        sizes = sorted((int(rng.integers(48, 130)) for _ in range(count)), reverse=True)
        boxes = place(rng, W, H, sizes)
        if boxes is None:
            continue
        img = next(bg).copy()
        for b in boxes:
            fi = usable[int(rng.integers(0, len(usable)))]
            tint = (1.0, float(rng.uniform(0.85, 1.0)), float(rng.uniform(0.7, 0.95)))
            img[b[1]:b[1] + b[3], b[0]:b[0] + b[2]] = face_patch(faces[fi], b[2], tint)
        ref = reference(img)
        if not clean(boxes, ref):
            continue
        name = "face_%02d.png" % n_pos
        write_png(os.path.join(corpus_dir, name), img)
        entries.append({"file": name, "kind": "face", "planted": boxes, "reference": ref})
        n_pos += 1

    for name, path in (("astronaut", SK + "astronaut.png"), ("grace_hopper", MPL + "grace_hopper.jpg")):
        img = load_rgb(path)
        h, w = img.shape[:2]
        scale = 360.0 / h
        img = np.asarray(Image.fromarray(img).resize((int(round(w * scale)), 360), Image.BILINEAR))
        ref = reference(img)
        fname = "photo_%s.png" % name
        write_png(os.path.join(corpus_dir, fname), img)
        entries.append({"file": fname, "kind": "face", "planted": [], "reference": ref})

    negatives = [
        ("chelsea", SK + "chelsea.png"),
        ("coffee", SK + "coffee.png"),
        ("china", SKL + "china.jpg"),
        ("rocket", SK + "rocket.jpg"),
        ("horse", SK + "horse.png"),
        ("moon", SK + "moon.png"),
        ("text", SK + "text.png"),
        ("grass", SK + "grass.png"),
        ("page", SK + "page.png"),
        ("hubble", SK + "hubble_deep_field.jpg"),
    ]
    for name, path in negatives:
        img = load_rgb(path)
        h, w = img.shape[:2]
        if max(h, w) > 480:
            scale = 480.0 / max(h, w)
            img = np.asarray(
                Image.fromarray(img).resize((int(round(w * scale)), int(round(h * scale))), Image.BILINEAR)
            )
        ref = reference(img)
        fname = "negative_%s.png" % name
        write_png(os.path.join(corpus_dir, fname), img)
        entries.append({"file": fname, "kind": "negative", "planted": [], "reference": ref})

    # Six faces of distinct sizes for the four-face cap.
    six = None
    for _ in range(200):
        sizes = [132, 116, 100, 86, 72, 60]
        boxes = place(rng, 640, 400, sizes)
        if boxes is None:
            continue
        img = np.full((400, 640, 3), 0, np.uint8)
        t = np.linspace(0, 1, 400)[:, None, None]
        img[:] = np.clip(np.array([70, 90, 140]) * (1 - t) + np.array([200, 205, 215]) * t, 0, 255).astype(np.uint8)
        for k, b in enumerate(boxes):
            img[b[1]:b[1] + b[3], b[0]:b[0] + b[2]] = face_patch(faces[usable[k * 3]], b[2], (1, 0.93, 0.85))
        ref = reference(img)
        if clean(boxes, ref):
            six = (img, boxes, ref)
            break
    if six is None:
        sys.exit("could not build a six-face image the reference fully detects")
    write_png(os.path.join(FIX, "six_faces.png"), six[0])

    # Face patches for the synthetic source.
    faces_dir = os.path.join(ROOT, "data", "faces")
    os.makedirs(faces_dir, exist_ok=True)
    for k in range(4):
        patch = face_patch(faces[usable[k * 7 + 1]], 100, (1.0, 0.92, 0.82))
        write_png(os.path.join(faces_dir, "face_%d.png" % k), patch)

    # A 30-frame sequence with slowly drifting faces for replay tests.
    seq_dir = os.path.join(FIX, "sequence")
    os.makedirs(seq_dir, exist_ok=True)
    for old in os.listdir(seq_dir):
        if old.endswith(".png"):
            os.remove(os.path.join(seq_dir, old))
    seq_faces = [(usable[2], 60, 80, 120, 2.0, 0.5), (usable[11], 380, 120, 100, -1.5, 0.3)]
    seq_refs = []
    for i in range(30):
        t = np.linspace(0, 1, 360)[:, None, None]
        img = np.clip(np.array([60, 80, 130]) * (1 - t) + np.array([210, 215, 225]) * t, 0, 255)
        img = np.broadcast_to(img, (360, 640, 3)).astype(np.uint8).copy()
        for fi, x0, y0, s, vx, vy in seq_faces:
            if i >= 24 and fi == usable[11]:
                continue  # second visitor leaves
            x, y = int(round(x0 + vx * i)), int(round(y0 + vy * i))
            img[y:y + s, x:x + s] = face_patch(faces[fi], s, (1.0, 0.9, 0.8))
        write_png(os.path.join(seq_dir, "frame_%03d.png" % i), img)
        seq_refs.append(reference(img))

    meta = {
        "cascade": "data/cascades/haarcascade_frontalface_default.xml",
        "reference": "cv2.CascadeClassifier.detectMultiScale (OpenCV %s)" % cv2.__version__,
        "gray": "(77 R + 150 G + 29 B) >> 8",
        "params": PARAMS,
        "images": entries,
        "six_faces": {"file": "six_faces.png", "planted": six[1], "reference": six[2]},
        "sequence": {"dir": "sequence", "reference": seq_refs},
    }
    with open(os.path.join(FIX, "corpus_reference.json"), "w") as f:
        json.dump(meta, f, indent=1)
    print("positives", n_pos + 2, "negatives", len(negatives), "attempts", attempts)
    for e in entries:
        print(e["file"], e["kind"], e["reference"])
    print("six", six[2])


if __name__ == "__main__":
    main()
