import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cbrw import (
    ChannelPlane,
    Method,
    cbrw_bitcmp,
    cbrw_bitxor,
    enroll,
    evaluate_pair,
    generate_offset_grid,
    generate_rwm,
    key_fingerprint,
)

from conftest import random_image

planes = st.tuples(st.integers(1, 8), st.integers(1, 8)).flatmap(
    lambda hw: st.tuples(arrays(np.uint8, hw), arrays(np.uint8, hw))
)


class TestBitXor:
    def test_zero_mask_is_identity(self, rng):
        s = ChannelPlane(rng.integers(0, 256, (4, 4)))
        assert cbrw_bitxor(s, ChannelPlane(np.zeros((4, 4), dtype=np.uint8))) == s

    def test_self_mask_is_zero(self, rng):
        s = ChannelPlane(rng.integers(0, 256, (4, 4)))
        assert not cbrw_bitxor(s, s).values.any()

    def test_complementary_bits(self):
        assert cbrw_bitxor(ChannelPlane([[0b10101010]]), ChannelPlane([[0b01010101]])).values[0, 0] == 255

    def test_mismatch(self):
        with pytest.raises(ValueError):
            cbrw_bitxor(ChannelPlane(np.zeros((2, 2))), ChannelPlane(np.zeros((2, 3))))


class TestBitCmp:
    def test_zero_mask_is_negative(self, rng):
        s = ChannelPlane(rng.integers(0, 256, (4, 4)))
        assert np.array_equal(cbrw_bitcmp(s, ChannelPlane(np.zeros((4, 4), dtype=np.uint8))).values, 255 - s.values)

    def test_self_mask_is_white(self, rng):
        s = ChannelPlane(rng.integers(0, 256, (4, 4)))
        assert np.all(cbrw_bitcmp(s, s).values == 255)

    def test_mismatch(self):
        with pytest.raises(ValueError):
            cbrw_bitcmp(ChannelPlane(np.zeros((2, 2))), ChannelPlane(np.zeros((3, 2))))

    @given(planes)
    def test_complement_of_xor(self, pair):
        s, r = map(ChannelPlane, pair)
        assert np.array_equal(cbrw_bitcmp(s, r).values, 255 - cbrw_bitxor(s, r).values.astype(int))

    @given(planes)
    def test_round_trips(self, pair):
        s, r = map(ChannelPlane, pair)
        assert cbrw_bitxor(cbrw_bitxor(s, r), r) == s
        assert np.array_equal((255 - cbrw_bitcmp(s, r).values) ^ r.values, s.values)


class TestMethod:
    @pytest.mark.parametrize("text,expected", [("xor", Method.BITXOR), ("BitXOR", Method.BITXOR),
                                               ("cmp", Method.BITCMP), ("bitcmp", Method.BITCMP)])
    def test_parse(self, text, expected):
        assert Method.parse(text) is expected

    def test_unknown(self):
        with pytest.raises(ValueError):
            Method.parse("and")


class TestEnroll:
    @pytest.mark.parametrize("method,op", [("xor", cbrw_bitxor), ("cmp", cbrw_bitcmp)])
    def test_equals_composed_pipeline(self, rng, method, op):
        img = random_image(rng, 10, 10)
        key = generate_offset_grid(10, 10, seed=4, offset_bound=30)
        plane = img.channels[0]
        expected = op(plane, generate_rwm(plane, key.channel(0)))
        assert enroll(img, key, method).image.channels[0] == expected

    def test_color_per_channel(self, face_rgb):
        key = generate_offset_grid(face_rgb.width, face_rgb.height, 3, seed=8)
        tmpl = enroll(face_rgb, key, Method.BITXOR)
        for c, plane in enumerate(face_rgb.channels):
            assert tmpl.image.channels[c] == cbrw_bitxor(plane, generate_rwm(plane, key.channel(c)))

    def test_deterministic_and_fingerprinted(self, rng):
        img = random_image(rng, 12, 9, channels=3)
        key = generate_offset_grid(9, 12, 3, seed=77)
        a, b = enroll(img, key), enroll(img, key)
        assert a == b
        assert a.key_fingerprint == key_fingerprint(key)
        assert len(a.key_fingerprint) == 16

    def test_shape_and_range_preserved(self, face_rgb):
        key = generate_offset_grid(face_rgb.width, face_rgb.height, 3, seed=1)
        assert enroll(face_rgb, key, "cmp").image.shape == face_rgb.shape

    def test_two_seeds_diverge(self, face):
        t = [enroll(face, generate_offset_grid(face.width, face.height, seed=s)).image for s in (10, 11)]
        assert evaluate_pair(*t).npcr >= 99

    def test_methods_are_complements(self, face):
        key = generate_offset_grid(face.width, face.height, seed=2)
        x = enroll(face, key, "xor").image.to_array().astype(int)
        c = enroll(face, key, "cmp").image.to_array().astype(int)
        assert np.array_equal(c, 255 - x)

    def test_rejects_mismatched_key(self, rng):
        img = random_image(rng, 10, 10)
        with pytest.raises(ValueError, match="key is 10x11x1"):
            enroll(img, generate_offset_grid(10, 11, seed=0))
        with pytest.raises(ValueError):
            enroll(img, generate_offset_grid(10, 10, 3, seed=0))

    def test_rejects_unknown_method(self, rng):
        img = random_image(rng, 4, 4)
        with pytest.raises(ValueError):
            enroll(img, generate_offset_grid(4, 4, seed=0), "rot13")

    @settings(max_examples=50, deadline=None)
    @given(st.data())
    def test_recoverable_with_rwm(self, data):
        h, w = data.draw(st.integers(1, 8)), data.draw(st.integers(1, 8))
        from cbrw import RasterImage
        img = RasterImage.from_array(data.draw(arrays(np.uint8, (h, w))))
        key = generate_offset_grid(w, h, seed=data.draw(st.integers(0, 2**64 - 1)))
        rw = generate_rwm(img.channels[0], key.channel(0)).values
        cx = enroll(img, key, "xor").image.channels[0].values
        cc = enroll(img, key, "cmp").image.channels[0].values
        assert np.array_equal(cx ^ rw, img.channels[0].values)
        assert np.array_equal((255 - cc) ^ rw, img.channels[0].values)
