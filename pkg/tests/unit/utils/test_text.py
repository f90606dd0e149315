import unittest

from dispatchengine.utils.text import content_words, stem, tokenize, words


class TestTokenize(unittest.TestCase):
    """Tokenizer and sentence indices"""

    def test_offsets_are_verbatim(self):
        text = "My wallet is gone. Call 615-555-0100!"
        for token in tokenize(text):
            self.assertEqual(text[token.start : token.end], token.text)

    def test_hyphen_and_apostrophe_words_stay_whole(self):
        self.assertEqual(words("It's 615-555-0100"), ["it's", "615-555-0100"])

    def test_sentence_indices(self):
        tokens = tokenize("Car crashed. Nobody hurt? Fine")
        self.assertEqual([t.sentence for t in tokens], [0, 0, 1, 1, 2])

    def test_empty_text(self):
        self.assertEqual(tokenize(""), [])


class TestContentWords(unittest.TestCase):
    def test_stopwords_removed(self):
        self.assertEqual(content_words("on the 2525 West End Ave"), ["2525", "west", "end", "ave"])

    def test_only_stopwords(self):
        self.assertEqual(content_words("I'm not sure"), ["sure"])
        self.assertEqual(content_words("it is what it is"), [])


class TestStem(unittest.TestCase):
    def test_suffixes(self):
        self.assertEqual(stem("shooting"), "shoot")
        self.assertEqual(stem("fired"), "fir")
        self.assertEqual(stem("guns"), "gun")
        self.assertEqual(stem("Humans"), "human")

    def test_short_words_untouched(self):
        self.assertEqual(stem("is"), "is")
        self.assertEqual(stem("bed"), "bed")
