"""Unit tests for PGM I/O, tiling, feature extraction and seeded splits."""

import math

import numpy as np
import pytest

from conftest import noise_image, stripe_image
from texent import (
    DomainError,
    EntropyMeasure,
    GrayImage,
    LabeledFeatureSet,
    PgmError,
    SpacingVector,
    SplitMix64,
    SplitSpec,
    build_feature_sets,
    compute_glcm,
    extract_feature,
    glcm_entropy,
    load_labeled_images,
    load_pgm,
    read_feature_csv,
    save_pgm,
    split,
    tile,
    write_feature_csv,
    write_pgm,
)

E1 = math.exp(-1)


class TestPgmLoad:
    def test_minimal_binary(self):
        img = load_pgm(b"P5\n1 1\n255\n\x00")
        assert (img.width, img.height, img.levels) == (1, 1, 256)
        assert img.pixels[0, 0] == 0

    def test_ascii_with_comments(self):
        data = b"P2 # plain text\n# another comment\n2 2\n3\n0 1\n2 3\n"
        img = load_pgm(data)
        assert img.pixels.tolist() == [[0, 1], [2, 3]]
        assert img.levels == 4

    def test_round_trip(self):
        for img in (noise_image(9, 5, seed=1), noise_image(4, 7, seed=2, levels=64)):
            back = load_pgm(save_pgm(img))
            assert np.array_equal(back.pixels, img.pixels)
            assert back.levels == img.levels

    def test_color_magic_unsupported(self):
        with pytest.raises(PgmError, match="P6"):
            load_pgm(b"P6\n1 1\n255\n\x00\x00\x00")

    def test_garbage_magic(self):
        with pytest.raises(PgmError):
            load_pgm(b"hello world")

    def test_truncated_payload_reports_offset(self):
        with pytest.raises(PgmError, match="byte") as err:
            load_pgm(b"P5\n2 2\n255\n\x00\x01")
        assert err.value.offset is not None

    def test_maxval_too_large(self):
        with pytest.raises(PgmError, match="maxval"):
            load_pgm(b"P5\n1 1\n65535\n\x00\x00")

    def test_non_integer_header(self):
        with pytest.raises(PgmError, match="width"):
            load_pgm(b"P5\nxx 1\n255\n\x00")

    def test_binary_pixel_above_maxval(self):
        with pytest.raises(PgmError, match="exceeds maxval") as err:
            load_pgm(b"P5\n2 1\n100\n\x00\xc8")
        assert err.value.offset == len(b"P5\n2 1\n100\n") + 1

    def test_ascii_truncated(self):
        with pytest.raises(PgmError):
            load_pgm(b"P2\n2 2\n255\n0 1 2")

    def test_empty_input(self):
        with pytest.raises(PgmError):
            load_pgm(b"")


class TestTile:
    def test_512_into_128(self):
        img = GrayImage(np.zeros((512, 512), dtype=np.int64), levels=256)
        assert len(tile(img, 128)) == 16

    def test_identity_tiling(self):
        img = noise_image(16, 16, seed=3)
        tiles = tile(img, 16)
        assert len(tiles) == 1
        assert np.array_equal(tiles[0].pixels, img.pixels)

    def test_non_divisible_rejected(self):
        img = GrayImage(np.zeros((100, 100), dtype=np.int64), levels=256)
        with pytest.raises(DomainError):
            tile(img, 128)

    def test_tiles_partition_exactly(self):
        img = noise_image(8, 8, seed=4)
        tiles = tile(img, 4)
        rebuilt = np.block([[tiles[0].pixels, tiles[1].pixels],
                            [tiles[2].pixels, tiles[3].pixels]])
        assert np.array_equal(rebuilt, img.pixels)


class TestExtractFeature:
    def test_constant_tile_hits_floor(self):
        img = GrayImage(np.full((128, 128), 50, dtype=np.int64), levels=256)
        assert extract_feature(img, EntropyMeasure("proposed"), 31) == [
            pytest.approx(E1, abs=1e-15)
        ]

    def test_equals_mean_of_four_directions(self):
        img = noise_image(20, 20, seed=5, levels=16)
        m = EntropyMeasure("shannon")
        got = extract_feature(img, m, 3)[0]
        per_dir = [
            glcm_entropy(compute_glcm(img, SpacingVector(3, theta)), m)
            for theta in (0, 45, 90, 135)
        ]
        assert got == pytest.approx(sum(per_dir) / 4, abs=1e-15)

    def test_noise_above_stripes(self):
        noisy = noise_image(32, 32, seed=6)
        stripes = stripe_image(32, 32, period=4, duty=2)
        m = EntropyMeasure("proposed-normalized")
        assert extract_feature(noisy, m, 4)[0] > extract_feature(stripes, m, 4)[0]

    def test_multi_distance_vector(self):
        img = noise_image(16, 16, seed=7, levels=8)
        m = EntropyMeasure("proposed")
        vec = extract_feature(img, m, [1, 2, 3])
        assert len(vec) == 3
        assert vec == [extract_feature(img, m, d)[0] for d in (1, 2, 3)]

    def test_bad_distances(self):
        img = noise_image(8, 8, seed=8)
        with pytest.raises(DomainError):
            extract_feature(img, EntropyMeasure("proposed"), 0)
        with pytest.raises(DomainError):
            extract_feature(img, EntropyMeasure("proposed"), [])


def _toy_set(classes=3, per_class=6, dim=2):
    rows = []
    for k in range(classes):
        for i in range(per_class):
            rows.append((f"c{k}", f"t{i}", [float(k)] * dim))
    return LabeledFeatureSet(rows)


class TestLabeledFeatureSet:
    def test_mismatched_lengths_rejected(self):
        with pytest.raises(DomainError):
            LabeledFeatureSet([("a", "t0", [1.0]), ("a", "t1", [1.0, 2.0])])

    def test_class_labels_sorted(self):
        fs = LabeledFeatureSet([("b", "t", [0.0]), ("a", "t", [0.0])])
        assert fs.class_labels() == ("a", "b")


class TestSplitMix64:
    def test_reference_stream(self):
        # First outputs of the published generator for seed 0.
        rng = SplitMix64(0)
        assert [rng.next() for _ in range(3)] == [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
        ]

    def test_shuffle_is_permutation(self):
        items = list(range(20))
        SplitMix64(99).shuffle(items)
        assert sorted(items) == list(range(20))
        assert items != list(range(20))


class TestSplit:
    def test_half_split_15x16(self):
        fs = _toy_set(classes=15, per_class=16)
        train, test = split(fs, SplitSpec(seed=42))
        assert len(train) == 120 and len(test) == 120
        assert all(len(g) == 8 for g in train.by_class().values())
        assert all(len(g) == 8 for g in test.by_class().values())

    def test_same_seed_same_split(self):
        fs = _toy_set()
        a = split(fs, SplitSpec(seed=7))
        b = split(fs, SplitSpec(seed=7))
        assert a[0].records == b[0].records and a[1].records == b[1].records

    def test_different_seed_differs(self):
        fs = _toy_set(classes=4, per_class=10)
        a = split(fs, SplitSpec(seed=1))
        b = split(fs, SplitSpec(seed=2))
        assert a[0].records != b[0].records

    def test_union_and_disjointness(self):
        fs = _toy_set()
        train, test = split(fs, SplitSpec(seed=3))
        merged = sorted(train.records + test.records)
        assert merged == sorted(fs.records)
        assert not set(train.records) & set(test.records)

    def test_counts_within_one_of_fraction(self):
        fs = _toy_set(classes=2, per_class=10)
        train, _ = split(fs, SplitSpec(seed=4, fraction=0.3))
        for group in train.by_class().values():
            assert abs(len(group) - 3) <= 1

    def test_small_class_rejected(self):
        fs = LabeledFeatureSet([("a", "t0", [0.0]), ("b", "t0", [1.0]), ("b", "t1", [1.0])])
        with pytest.raises(DomainError):
            split(fs, SplitSpec(seed=5))

    def test_bad_fraction(self):
        with pytest.raises(DomainError):
            SplitSpec(seed=1, fraction=1.0)


class TestFeatureCsv:
    def test_round_trip(self, tmp_path):
        fs = LabeledFeatureSet(
            [("a", "t0", [0.123456789012345, 1.0]), ("b", "t1", [2.0, 3.5])]
        )
        path = tmp_path / "features.csv"
        write_feature_csv(path, fs)
        header = path.read_text().splitlines()[0]
        assert header == "label,tile,f1,f2"
        back = read_feature_csv(path)
        assert back.records == fs.records

    def test_rejects_foreign_csv(self, tmp_path):
        path = tmp_path / "other.csv"
        path.write_text("x,y\n1,2\n")
        with pytest.raises(DomainError):
            read_feature_csv(path)


class TestLabeledCorpus:
    def test_directory_layout(self, tmp_path):
        for cls in ("wood", "grass"):
            (tmp_path / cls).mkdir()
            for i in range(2):
                write_pgm(tmp_path / cls / f"t{i}.pgm", noise_image(8, 8, seed=i))
        items = load_labeled_images(tmp_path)
        assert [(label, name) for label, name, _ in items] == [
            ("grass", "t0"), ("grass", "t1"), ("wood", "t0"), ("wood", "t1"),
        ]

    def test_empty_corpus_rejected(self, tmp_path):
        with pytest.raises(DomainError):
            load_labeled_images(tmp_path)

    def test_build_feature_sets_thread_invariant(self, tmp_path):
        items = [
            ("a", f"t{i}", noise_image(12, 12, seed=i, levels=16)) for i in range(6)
        ]
        measures = {
            "p": EntropyMeasure("proposed"),
            "s": EntropyMeasure("shannon"),
        }
        seq = build_feature_sets(items, measures, distances=[1, 2], threads=1)
        par = build_feature_sets(items, measures, distances=[1, 2], threads=4)
        assert seq["p"].records == par["p"].records
        assert seq["s"].records == par["s"].records
