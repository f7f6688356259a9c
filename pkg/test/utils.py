__all__ = [
    "CanonicalJsonTest", "DeriveSeedTest", "NormalizeDomainTest", "TypenameTest",
]

import hashlib
import unittest
from newsgraph.utils import *

class CanonicalJsonTest(unittest.TestCase):
    def test_keys_are_sorted_and_whitespace_is_omitted(self):
        self.assertEqual(canonicalJson({"b": [1, 2], "a": None}), '{"a":null,"b":[1,2]}')

    def test_equal_mappings_render_identically_regardless_of_insertion_order(self):
        a = {"x": 1, "y": {"p": 2.5, "q": "z"}}
        b = {"y": {"q": "z", "p": 2.5}, "x": 1}
        self.assertEqual(canonicalJson(a), canonicalJson(b))

    def test_stable_hash_is_the_sha256_of_the_canonical_rendering(self):
        obj = {"seed": 3, "tasks": ["reliability"]}
        expected = hashlib.sha256(canonicalJson(obj).encode("utf-8")).hexdigest()
        self.assertEqual(stableHash(obj), expected)

class DeriveSeedTest(unittest.TestCase):
    def test_the_same_key_path_always_derives_the_same_seed(self):
        self.assertEqual(deriveSeed(7, "tree", 3), deriveSeed(7, "tree", 3))

    def test_different_keys_or_parents_derive_different_seeds(self):
        seeds = {
            deriveSeed(7, "tree", 3),
            deriveSeed(7, "tree", 4),
            deriveSeed(8, "tree", 3),
            deriveSeed(7, "fold", 3),
        }

        self.assertEqual(len(seeds), 4)

    def test_derived_seeds_fit_in_32_bits(self):
        for i in range(50):
            seed = deriveSeed(i, "k")
            self.assertGreaterEqual(seed, 0)
            self.assertLess(seed, 2 ** 32)

class NormalizeDomainTest(unittest.TestCase):
    def test_scheme_path_port_and_www_prefix_are_removed(self):
        self.assertEqual(
            normalizeDomain("HTTPS://www.Example.COM:8080/news/a?b=c#d"),
            "example.com",
        )

    def test_a_bare_domain_is_returned_lowercased(self):
        self.assertEqual(normalizeDomain("  News.Example.org "), "news.example.org")

    def test_trailing_dot_and_user_info_are_removed(self):
        self.assertEqual(normalizeDomain("http://user@site.example./"), "site.example")

    def test_input_without_a_host_raises_ValueError(self):
        self.assertRaises(ValueError, normalizeDomain, "https:///path")
        self.assertRaises(ValueError, normalizeDomain, "   ")

class TypenameTest(unittest.TestCase):
    class Inner:
        pass

    def checkQualifiedName(self, qualname):
        self.assertTrue(qualname.startswith(__name__))
        self.assertEqual(qualname[len(__name__)], ".")

        # drop the module path
        qualname = qualname[len(__name__)+1:]
        self.assertIs(eval(qualname), self.Inner)

    def test_return_the_fully_qualified_class_name(self):
        self.checkQualifiedName(typename(self.Inner, qualified=True))

    def test_return_the_fully_qualified_name_of_the_objects_class(self):
        self.checkQualifiedName(typename(self.Inner(), qualified=True))

    def test_return_the_unqualified_class_name(self):
        self.assertEqual(typename(self.Inner), "Inner")

    def test_return_the_unqualified_name_of_the_objects_class(self):
        self.assertEqual(typename(self.Inner()), "Inner")

if __name__ == "__main__":
    unittest.main()
