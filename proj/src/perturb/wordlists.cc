//
// Copyright 2025 The IEForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Generated word lists. The high-frequency list holds 1000 common English
// words; both lists are lowercase and alphabetically ordered.

#include "perturb/wordlists.h"

#include "util/text.h"

namespace ieforge {

namespace {

constexpr const char* kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am",
    "an", "and", "any", "are", "as", "at", "be", "because",
    "been", "before", "being", "below", "between", "both", "but", "by",
    "can", "did", "do", "does", "doing", "don", "down", "during",
    "each", "few", "for", "from", "further", "had", "has", "have",
    "having", "he", "her", "here", "hers", "herself", "him", "himself",
    "his", "how", "i", "if", "in", "into", "is", "it",
    "its", "itself", "just", "me", "more", "most", "my", "myself",
    "no", "nor", "not", "now", "of", "off", "on", "once",
    "only", "or", "other", "our", "ours", "ourselves", "out", "over",
    "own", "s", "same", "she", "should", "so", "some", "such",
    "t", "than", "that", "the", "their", "theirs", "them", "themselves",
    "then", "there", "these", "they", "this", "those", "through", "to",
    "too", "under", "until", "up", "very", "was", "we", "were",
    "what", "when", "where", "which", "while", "who", "whom", "why",
    "will", "with", "you", "your", "yours", "yourself", "yourselves",
};

constexpr const char* kHighFrequency[] = {
    "ability", "able", "account", "across", "act", "action", "active", "actually",
    "add", "added", "addition", "adjective", "afraid", "africa", "afternoon", "age",
    "ago", "agreed", "ahead", "air", "allow", "almost", "alone", "along",
    "alphabet", "already", "also", "although", "always", "america", "among", "amount",
    "angle", "angry", "animal", "another", "answer", "anything", "appear", "apple",
    "area", "arm", "around", "arrived", "article", "ask", "atom", "attention",
    "aunt", "average", "away", "baby", "back", "bad", "bag", "ball",
    "ban", "bank", "bar", "base", "basket", "battle", "bear", "beat",
    "beautiful", "beauty", "became", "become", "bed", "began", "begin", "beginning",
    "behind", "believe", "belong", "beside", "best", "better", "big", "bigger",
    "bill", "bird", "bit", "black", "blood", "blow", "blue", "board",
    "boat", "body", "bone", "book", "bottle", "bottom", "bought", "box",
    "boy", "branch", "bread", "break", "breakfast", "breath", "bridge", "bright",
    "bring", "broken", "brother", "brought", "brown", "build", "building", "built",
    "burn", "burning", "business", "button", "buy", "cake", "call", "came",
    "camp", "cannot", "capital", "captain", "car", "care", "carefully", "carry",
    "case", "castle", "cat", "catch", "cattle", "caught", "cause", "cell",
    "cent", "center", "century", "certain", "chance", "change", "chart", "check",
    "chief", "child", "children", "choice", "choose", "church", "circle", "city",
    "class", "clean", "clear", "click", "climb", "climbed", "clock", "close",
    "closed", "clothes", "cloud", "coal", "coast", "coat", "cold", "color",
    "column", "come", "common", "company", "compare", "complete", "compound", "condition",
    "consider", "consonant", "contain", "continued", "contrast", "control", "cool", "copy",
    "corn", "corner", "correct", "cost", "cotton", "could", "count", "country",
    "course", "cover", "covered", "cow", "cream", "crease", "create", "cried",
    "crop", "cross", "crowd", "current", "cut", "dad", "dance", "dark",
    "daughter", "day", "dead", "deal", "dear", "death", "decide", "decided",
    "decimal", "deep", "degree", "depend", "describe", "desert", "design", "details",
    "determine", "develop", "developed", "device", "dictionary", "died", "difference", "different",
    "difficult", "dinner", "direct", "direction", "discovered", "discuss", "dish", "distance",
    "divided", "division", "doctor", "dog", "dollar", "done", "door", "double",
    "doubt", "dozen", "draw", "drawing", "dress", "drink", "drive", "drop",
    "dry", "duck", "dust", "duty", "eager", "ear", "early", "earn",
    "earth", "ease", "easily", "east", "easy", "eat", "edge", "effect",
    "egg", "eight", "either", "eleven", "else", "empty", "end", "enemy",
    "energy", "engine", "england", "english", "enjoy", "enough", "entered", "equal",
    "equation", "especially", "europe", "even", "evening", "event", "ever", "every",
    "everyone", "everything", "exact", "exactly", "example", "except", "excited", "exciting",
    "exercise", "expect", "experience", "experiment", "explain", "explore", "express", "eye",
    "face", "fact", "factor", "fair", "fall", "familiar", "family", "famous",
    "fancy", "far", "farm", "farmer", "farther", "fast", "father", "fear",
    "feature", "fed", "feel", "feet", "fell", "fellow", "felt", "fence",
    "field", "fifteen", "fifth", "fifty", "fig", "fight", "figure", "fill",
    "filled", "finally", "find", "fine", "finger", "finish", "finished", "fire",
    "first", "fish", "fit", "five", "flat", "flight", "float", "floor",
    "flow", "flower", "fly", "fold", "follow", "food", "foot", "force",
    "forest", "form", "forward", "found", "four", "fourth", "fraction", "frame",
    "free", "french", "fresh", "friend", "front", "fruit", "fuel", "full",
    "fun", "function", "furniture", "future", "gain", "game", "garden", "gas",
    "gate", "gather", "gave", "general", "gentle", "get", "gift", "girl",
    "give", "glad", "glass", "go", "god", "goes", "gold", "gone",
    "good", "got", "government", "gradually", "grand", "grass", "gray", "great",
    "greatest", "green", "grew", "ground", "group", "grow", "grown", "guess",
    "guide", "gulf", "gun", "habit", "hair", "half", "hall", "hand",
    "happen", "happened", "happy", "harbor", "hard", "hat", "hate", "hay",
    "head", "heading", "health", "hear", "heard", "heart", "heat", "heavy",
    "height", "held", "hello", "help", "hidden", "high", "higher", "hill",
    "history", "hit", "hoe", "hold", "hole", "home", "hope", "horse",
    "hot", "hour", "house", "however", "huge", "human", "hundred", "hunt",
    "hunting", "hurried", "hurry", "hurt", "husband", "ice", "idea", "imagine",
    "immediately", "importance", "important", "impossible", "inch", "include", "increase", "indeed",
    "indicate", "industry", "influence", "information", "insect", "inside", "instance", "instant",
    "instead", "instrument", "interest", "invented", "iron", "island", "isle", "japanese",
    "job", "joined", "joy", "judge", "jump", "jumped", "junior", "keep",
    "kept", "key", "kill", "killed", "kind", "king", "kitchen", "knee",
    "knew", "knife", "know", "known", "lack", "lady", "lake", "lamp",
    "land", "language", "large", "larger", "largest", "last", "later", "laugh",
    "laughed", "law", "lay", "lead", "leader", "learn", "least", "leave",
    "leaving", "led", "left", "leg", "length", "less", "lesson", "let",
    "letter", "level", "lie", "life", "lift", "light", "like", "likely",
    "limit", "line", "lion", "lips", "liquid", "list", "listen", "little",
    "live", "located", "location", "lonely", "long", "longer", "look", "lost",
    "lot", "loud", "love", "low", "lower", "lucky", "lunch", "machine",
    "made", "magic", "magnet", "main", "major", "make", "man", "manner",
    "many", "map", "mark", "market", "mass", "master", "mat", "match",
    "material", "matter", "may", "mayor", "meal", "mean", "meant", "measure",
    "medicine", "meet", "melody", "melted", "member", "memory", "men", "mention",
    "merely", "message", "metal", "method", "mice", "middle", "might", "mighty",
    "mile", "milk", "million", "mind", "mine", "minor", "minute", "miss",
    "mistake", "mix", "modern", "molecular", "moment", "money", "month", "mood",
    "moon", "morning", "mother", "mountain", "mouth", "move", "moving", "much",
    "muscle", "music", "musical", "must", "mysterious", "nails", "name", "nation",
    "natural", "near", "nearby", "nearest", "necessary", "neck", "need", "needle",
    "negative", "neighbor", "nest", "never", "new", "newspaper", "next", "nice",
    "night", "nine", "nobody", "nodded", "noise", "none", "noon", "north",
    "nose", "note", "noted", "nothing", "notice", "noun", "number", "numeral",
    "nuts", "object", "observe", "occur", "ocean", "offer", "officer", "official",
    "often", "oh", "oil", "old", "older", "one", "onto", "open",
    "opinion", "opposite", "orange", "order", "organized", "original", "ought", "outside",
    "oxygen", "pack", "page", "paid", "paint", "pair", "palace", "pale",
    "pan", "paper", "paragraph", "parallel", "parent", "part", "particular", "partly",
    "party", "pass", "passage", "passed", "past", "path", "pattern", "pay",
    "peace", "pen", "pencil", "people", "per", "percent", "perhaps", "period",
    "person", "phrase", "picked", "picking", "picture", "piece", "place", "plain",
    "plan", "plane", "planet", "plant", "play", "please", "point", "poor",
    "possible", "pound", "power", "practice", "present", "president", "probably", "problem",
    "produce", "product", "pulled", "pushed", "put", "question", "quickly", "quiet",
    "quite", "race", "rain", "raised", "ran", "reached", "read", "ready",
    "really", "reason", "received", "record", "red", "region", "remain", "remember",
    "reply", "report", "represent", "rest", "result", "return", "ride", "right",
    "rise", "river", "road", "rock", "rolled", "room", "root", "round",
    "row", "rule", "run", "said", "sail", "sat", "save", "saw",
    "say", "scale", "school", "scientist", "sea", "second", "section", "see",
    "seed", "seem", "seen", "sell", "sent", "sentence", "set", "several",
    "shall", "shape", "ship", "short", "shouted", "show", "shown", "side",
    "sign", "simple", "since", "sing", "single", "sit", "six", "size",
    "skin", "sky", "sleep", "slowly", "small", "smiled", "snow", "soft",
    "soil", "solve", "solved", "someone", "something", "sometimes", "son", "song",
    "soon", "sound", "south", "space", "speak", "special", "speed", "spell",
    "spring", "square", "stand", "star", "start", "state", "statement", "stay",
    "step", "stick", "still", "stone", "stood", "stop", "store", "story",
    "straight", "strange", "street", "strong", "study", "subject", "suddenly", "sum",
    "summer", "sun", "suppose", "sure", "surface", "surprise", "syllable", "symbol",
    "system", "table", "take", "talk", "tall", "teacher", "team", "tell",
    "temperature", "ten", "test", "thing", "think", "third", "though", "thought",
    "thousand", "three", "time", "tiny", "today", "together", "told", "took",
    "top", "touch", "toward", "town", "train", "travel", "tree", "trip",
    "trouble", "true", "try", "turn", "two", "type", "understand", "unit",
    "upon", "us", "use", "usually", "valley", "verb", "village", "visit",
    "voice", "vowel", "wait", "walk", "wall", "want", "war", "warm",
    "watch", "water", "wave", "way", "wear", "weather", "week", "well",
    "went", "west", "wheel", "whether", "white", "whole", "whose", "wide",
    "wild", "wind", "window", "winter", "wire", "wish", "within", "without",
    "woman", "wonder", "wood", "word", "work", "world", "would", "write",
    "written", "wrong", "wrote", "yard", "year", "yes", "yet", "young",
};

}  // namespace

const std::unordered_set<std::string>& StopwordSet() {
  static const auto* set = new std::unordered_set<std::string>(
      std::begin(kStopwords), std::end(kStopwords));
  return *set;
}

const std::unordered_set<std::string>& HighFrequencySet() {
  static const auto* set = new std::unordered_set<std::string>(
      std::begin(kHighFrequency), std::end(kHighFrequency));
  return *set;
}

bool IsStopword(std::string_view word) {
  return StopwordSet().count(AsciiLower(word)) > 0;
}

bool IsHighFrequency(std::string_view word) {
  return HighFrequencySet().count(AsciiLower(word)) > 0;
}

}  // namespace ieforge
