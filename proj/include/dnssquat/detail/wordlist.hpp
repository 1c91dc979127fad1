#ifndef DNSSQUAT_DETAIL_WORDLIST_HPP
#define DNSSQUAT_DETAIL_WORDLIST_HPP

#include <array>
#include <string_view>

namespace dnssquat::detail {

// Common English words used to build legitimate-looking names.
inline constexpr std::array<std::string_view, 664> kWordlist = {
    "able", "about", "above", "act", "add", "age", "ago", "air", "all", "also",
    "area", "army", "art", "ask", "away", "baby", "back", "bad", "bag", "ball",
    "band", "bank", "bar", "base", "bath", "bay", "beach", "bear", "beat", "bed",
    "beer", "bell", "belt", "best", "bet", "big", "bike", "bill", "bird", "bit",
    "black", "blog", "blue", "board", "boat", "body", "bond", "bone", "book", "boom",
    "boot", "born", "boss", "both", "bowl", "box", "boy", "brain", "bread", "break",
    "brick", "bride", "bring", "broad", "brown", "buck", "build", "bus", "busy", "buy",
    "cake", "call", "calm", "camp", "can", "cap", "car", "card", "care", "cart",
    "case", "cash", "cast", "cat", "cell", "chain", "chair", "chart", "chat", "cheap",
    "check", "chef", "chip", "city", "class", "clean", "clear", "click", "climb", "clock",
    "close", "cloud", "club", "coach", "coast", "code", "coffee", "cold", "color", "come",
    "cook", "cool", "copy", "core", "corn", "cost", "count", "court", "cover", "craft",
    "crazy", "cream", "crew", "cross", "crowd", "cup", "cure", "cut", "cycle", "daily",
    "dance", "dark", "data", "date", "day", "deal", "dear", "deep", "deer", "desk",
    "dial", "diet", "dirt", "dish", "dock", "dog", "door", "dose", "down", "draw",
    "dream", "dress", "drink", "drive", "drop", "drum", "dry", "duck", "dust", "early",
    "earth", "east", "easy", "eat", "edge", "egg", "end", "enjoy", "equal", "event",
    "exit", "expert", "extra", "eye", "face", "fact", "fair", "fall", "fame", "family",
    "fan", "farm", "fast", "fat", "fear", "feed", "feel", "few", "field", "fight",
    "file", "fill", "film", "final", "find", "fine", "fire", "firm", "fish", "fit",
    "flag", "flat", "fleet", "flow", "fly", "focus", "fold", "folk", "food", "foot",
    "force", "form", "fort", "free", "fresh", "friend", "front", "fruit", "fuel", "full",
    "fun", "fund", "game", "garden", "gas", "gate", "gear", "gift", "girl", "give",
    "glad", "glass", "globe", "goal", "gold", "golf", "good", "grab", "grand", "grass",
    "great", "green", "grid", "group", "grow", "guard", "guest", "guide", "gym", "hair",
    "half", "hall", "hand", "happy", "hard", "hat", "head", "heal", "heart", "heat",
    "help", "herb", "hero", "high", "hill", "hint", "hire", "hold", "hole", "home",
    "hope", "horse", "host", "hot", "hotel", "hour", "house", "hub", "huge", "hunt",
    "idea", "image", "inch", "info", "iron", "island", "item", "job", "join", "joke",
    "joy", "judge", "juice", "jump", "just", "keep", "key", "kick", "kid", "kind",
    "king", "kit", "kitchen", "knife", "lab", "lady", "lake", "lamp", "land", "large",
    "last", "late", "laugh", "law", "lead", "leaf", "learn", "left", "legal", "lemon",
    "level", "life", "lift", "light", "like", "lime", "line", "link", "lion", "list",
    "live", "load", "loan", "local", "lock", "logic", "long", "look", "loop", "lord",
    "love", "low", "luck", "lunch", "mail", "main", "major", "make", "mall", "man",
    "map", "mark", "market", "mass", "master", "match", "meal", "meet", "menu", "metal",
    "mind", "mint", "miss", "mix", "mobile", "mode", "money", "month", "moon", "more",
    "motor", "mount", "mouse", "move", "movie", "much", "music", "name", "nation", "near",
    "neat", "need", "net", "new", "news", "next", "nice", "night", "noble", "north",
    "note", "novel", "ocean", "offer", "office", "oil", "old", "one", "online", "open",
    "orange", "order", "out", "owner", "pack", "page", "paint", "pair", "palm", "paper",
    "park", "part", "party", "pass", "past", "path", "pay", "peace", "peak", "pen",
    "people", "pet", "phone", "photo", "piano", "pick", "pie", "pilot", "pink", "pipe",
    "pizza", "place", "plain", "plan", "plant", "plate", "play", "plus", "pocket", "point",
    "pool", "pop", "port", "post", "power", "press", "price", "pride", "prime", "print",
    "pro", "pure", "push", "quest", "quick", "quiet", "race", "radio", "rain", "range",
    "rate", "raw", "reach", "read", "ready", "real", "red", "rent", "rest", "rice",
    "rich", "ride", "right", "ring", "rise", "river", "road", "rock", "role", "roof",
    "room", "root", "rose", "round", "route", "royal", "rule", "run", "rush", "safe",
    "sail", "salt", "sand", "save", "scale", "school", "score", "sea", "seat", "secret",
    "seed", "sell", "send", "sense", "serve", "set", "shape", "share", "sharp", "shell",
    "shift", "ship", "shop", "short", "show", "side", "sign", "silk", "silver", "simple",
    "sing", "site", "size", "skill", "sky", "sleep", "slow", "small", "smart", "smile",
    "snow", "soft", "solar", "solid", "song", "sound", "south", "space", "spark", "speed",
    "spice", "spin", "sport", "spot", "spring", "square", "staff", "stage", "star", "start",
    "state", "stay", "steel", "step", "stock", "stone", "stop", "store", "storm", "story",
    "street", "strong", "studio", "style", "sugar", "suit", "sun", "super", "sure", "sweet",
    "swim", "table", "tail", "talent", "talk", "task", "taste", "tax", "tea", "team",
    "tech", "tell", "term", "test", "text", "thin", "think", "tide", "time", "tiny",
    "tip", "title", "today", "tool", "top", "total", "touch", "tour", "town", "toy",
    "track", "trade", "train", "travel", "tree", "trend", "trip", "truck", "true", "trust",
    "truth", "tune", "turn", "twin", "union", "unit", "urban", "user", "valley", "value",
    "van", "vast", "video", "view", "villa", "visit", "vital", "voice", "vote", "walk",
    "wall", "warm", "wash", "watch", "water", "wave", "way", "wealth", "wear", "web",
    "week", "well", "west", "wheel", "white", "wide", "wild", "win", "wind", "wine",
    "wing", "wise", "wolf", "wood", "word", "work", "world", "yard", "year", "yellow",
    "young", "youth", "zero", "zone",
};

}  // namespace dnssquat::detail

#endif  // DNSSQUAT_DETAIL_WORDLIST_HPP
