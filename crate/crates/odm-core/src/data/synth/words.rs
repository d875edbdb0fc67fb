//! Embedded vocabulary for the corpus generator. Function words carry the
//! bulk of the token mass; content words are sampled through topics so each
//! word has a distinctive co-occurrence signature as well as a distinctive
//! frequency.

/// Sprinkled uniformly at a low rate so the rarest letters (j, q, x, z)
/// keep roughly the frequency floor they have in real English text.
pub(super) const RARE_LETTER_WORDS: &[&str] = &[
    "zebra", "size", "sizes", "haze", "hazy", "dozen", "puzzle", "puzzled", "quartz", "zigzag",
    "zinc", "jazz", "quiz", "zeal", "zealous", "graze", "grazing", "breeze", "frozen", "quick",
    "quickly", "quiet", "quite", "question", "quality", "quantity", "inquire", "request", "just",
    "joy", "joint", "jury", "jungle", "judge", "judged", "major", "object", "objects", "subject",
    "exact", "exactly", "axis", "oxen", "expert", "example", "extra", "explain", "extent", "six",
    "sixty", "sixth", "box", "boxes", "mix", "mixed", "mixture", "text", "next", "expect", "wax",
];

pub(super) const FUNCTION_WORDS: &[&str] = &[
    "the", "of", "and", "a", "to", "in", "is", "it", "that", "was", "as", "for", "are", "with",
    "be", "been", "by", "on", "not", "this", "have", "or", "from", "which", "but", "at", "they",
    "we", "his", "her", "an", "will", "would", "there", "their", "one", "all", "may", "can",
    "has", "more", "when", "some", "if", "so", "these", "other", "than", "its", "into", "only",
    "most", "each", "very", "much", "our", "any", "no", "such", "them",
];

pub(super) const CONTENT_WORDS: &[&str] = &[
    "species", "nature", "selection", "variation", "forms", "life", "plants", "animals",
    "conditions", "structure", "distinct", "degree", "individuals", "birds", "great", "common",
    "differences", "breeds", "varieties", "organic", "modified", "period", "generally", "part",
    "view", "different", "parts", "case", "manner", "number", "characters", "genera", "wild",
    "modification", "certain", "long", "believe", "slight", "natural", "climate", "between",
    "produced", "power", "offspring", "changed", "considerable", "domestic", "instance",
    "several", "facts", "respect", "points", "inhabitants", "world", "whole", "single",
    "during", "change", "process", "large", "small", "groups", "descended", "parent",
    "successive", "generation", "generations", "inherited", "tendency", "variability",
    "organs", "perfect", "state", "present", "existence", "struggle", "survival", "adapted",
    "habits", "food", "water", "land", "sea", "island", "islands", "continent", "region",
    "regions", "country", "countries", "range", "wide", "extend", "local", "rare", "extinct",
    "extinction", "record", "geological", "formation", "formations", "rocks", "beds", "strata",
    "fossil", "remains", "ancient", "modern", "recent", "epoch", "time", "times", "years",
    "ages", "slow", "slowly", "gradual", "gradually", "sudden", "appear", "appeared",
    "disappear", "preserved", "perfect", "imperfect", "chapter", "subject", "order", "family",
    "class", "classes", "group", "allied", "related", "relation", "relations", "affinity",
    "resemblance", "resemble", "similar", "dissimilar", "identical", "community", "descent",
    "theory", "fact", "evidence", "proof", "argument", "reason", "reasons", "cause", "causes",
    "effect", "effects", "law", "laws", "principle", "principles", "rule", "rules", "exception",
    "exceptions", "difficulty", "difficulties", "objection", "objections", "answer", "explain",
    "explained", "explanation", "account", "observed", "observation", "observations",
    "experiment", "experiments", "trial", "author", "authors", "naturalist", "naturalists",
    "writer", "writers", "opinion", "judgment", "knowledge", "ignorance", "doubt", "certainty",
    "probable", "improbable", "possible", "impossible", "likely", "unlikely", "chance",
    "accident", "accidental", "purpose", "design", "plan", "scheme", "system", "systems",
    "method", "methods", "means", "way", "ways", "mode", "modes", "form", "formed", "shape",
    "size", "length", "breadth", "height", "weight", "colour", "colours", "bright", "dull",
    "dark", "light", "white", "black", "red", "blue", "green", "yellow", "brown", "grey",
    "beauty", "beautiful", "ornament", "ornamental", "plumage", "feathers", "wings", "wing",
    "tail", "beak", "legs", "leg", "feet", "foot", "claws", "teeth", "tooth", "bones", "bone",
    "skeleton", "skull", "jaw", "jaws", "muscles", "muscle", "nerves", "nerve", "brain",
    "blood", "heart", "lungs", "stomach", "skin", "hair", "horns", "horn", "hoofs", "shell",
    "shells", "scales", "fins", "fin", "gills", "eyes", "eye", "vision", "sight", "ears",
    "ear", "hearing", "voice", "sound", "sounds", "song", "sing", "cry", "call", "instinct",
    "instincts", "intelligence", "mind", "mental", "memory", "habit", "practice", "exercise",
    "use", "disuse", "organ", "function", "functions", "office", "performed", "perform",
    "action", "actions", "active", "inactive", "growth", "grow", "grows", "growing", "grew",
    "development", "developed", "develop", "embryo", "embryos", "young", "old", "age", "adult",
    "mature", "immature", "larva", "larvae", "pupa", "cocoon", "egg", "eggs", "seed", "seeds",
    "fruit", "fruits", "flower", "flowers", "petals", "pollen", "nectar", "leaves", "leaf",
    "branches", "branch", "twigs", "stem", "stems", "roots", "root", "bark", "wood", "trees",
    "tree", "forest", "forests", "grass", "grasses", "herbs", "herb", "weeds", "weed", "moss",
    "ferns", "fern", "pine", "oak", "beech", "palm", "orchids", "orchid", "cabbage", "wheat",
    "barley", "oats", "maize", "rice", "peas", "beans", "turnip", "carrot", "potato", "apple",
    "pear", "plum", "cherry", "grape", "rose", "roses", "violet", "daisy", "tulip", "lily",
    "garden", "gardens", "field", "fields", "meadow", "pasture", "farm", "farms", "soil",
    "ground", "earth", "clay", "sand", "gravel", "stone", "stones", "mountain", "mountains",
    "hill", "hills", "valley", "valleys", "plain", "plains", "desert", "deserts", "marsh",
    "swamp", "bog", "lake", "lakes", "river", "rivers", "stream", "streams", "brook", "pond",
    "pool", "shore", "coast", "beach", "cliff", "cliffs", "cave", "caves", "rock", "reef",
    "reefs", "coral", "tide", "tides", "wave", "waves", "current", "currents", "wind", "winds",
    "storm", "storms", "rain", "snow", "ice", "frost", "hail", "fog", "mist", "cloud",
    "clouds", "sky", "sun", "moon", "stars", "star", "heat", "cold", "warm", "cool",
    "temperature", "summer", "winter", "spring", "autumn", "season", "seasons", "day", "days",
    "night", "nights", "morning", "evening", "noon", "month", "months", "week", "weeks",
    "hour", "hours", "minute", "minutes", "moment", "moments", "horse", "horses", "mare",
    "stallion", "colt", "pony", "donkey", "ass", "mule", "zebra", "cattle", "cow", "cows",
    "bull", "bulls", "ox", "oxen", "calf", "calves", "sheep", "lamb", "lambs", "ram", "ewe",
    "goat", "goats", "pig", "pigs", "swine", "boar", "sow", "dog", "dogs", "hound", "hounds",
    "terrier", "spaniel", "mastiff", "greyhound", "bulldog", "pointer", "setter", "puppy",
    "cat", "cats", "kitten", "rabbit", "rabbits", "hare", "hares", "mouse", "mice", "rat",
    "rats", "squirrel", "beaver", "otter", "weasel", "ferret", "badger", "fox", "foxes",
    "wolf", "wolves", "bear", "bears", "lion", "lions", "tiger", "tigers", "leopard",
    "panther", "jaguar", "lynx", "hyena", "jackal", "elephant", "elephants", "rhinoceros",
    "hippopotamus", "camel", "camels", "giraffe", "deer", "stag", "doe", "fawn", "elk",
    "moose", "antelope", "gazelle", "buffalo", "bison", "monkey", "monkeys", "ape", "apes",
    "baboon", "lemur", "bat", "bats", "mole", "moles", "hedgehog", "shrew", "opossum",
    "kangaroo", "wombat", "sloth", "armadillo", "whale", "whales", "dolphin", "porpoise",
    "seal", "seals", "walrus", "manatee", "pigeon", "pigeons", "dove", "doves", "fowl",
    "fowls", "hen", "hens", "cock", "chicken", "chickens", "duck", "ducks", "goose", "geese",
    "swan", "swans", "turkey", "peacock", "pheasant", "partridge", "quail", "grouse",
    "sparrow", "sparrows", "finch", "finches", "canary", "linnet", "thrush", "blackbird",
    "robin", "wren", "lark", "larks", "swallow", "swallows", "swift", "martin", "starling",
    "crow", "crows", "raven", "rook", "magpie", "jay", "cuckoo", "owl", "owls", "hawk",
    "hawks", "falcon", "eagle", "eagles", "vulture", "kite", "heron", "stork", "crane",
    "ibis", "flamingo", "gull", "gulls", "tern", "petrel", "albatross", "penguin", "ostrich",
    "emu", "cassowary", "parrot", "parrots", "woodpecker", "kingfisher", "hummingbird",
    "snake", "snakes", "serpent", "viper", "adder", "python", "boa", "cobra", "lizard",
    "lizards", "gecko", "iguana", "chameleon", "crocodile", "alligator", "turtle", "turtles",
    "tortoise", "frog", "frogs", "toad", "toads", "newt", "salamander", "fish", "fishes",
    "salmon", "trout", "pike", "perch", "carp", "eel", "eels", "herring", "cod", "mackerel",
    "sole", "plaice", "flounder", "shark", "sharks", "ray", "skate", "sturgeon", "minnow",
    "goldfish", "insect", "insects", "beetle", "beetles", "weevil", "ant", "ants", "bee",
    "bees", "wasp", "wasps", "hornet", "fly", "flies", "gnat", "mosquito", "moth", "moths",
    "butterfly", "butterflies", "caterpillar", "caterpillars", "grasshopper", "cricket",
    "locust", "dragonfly", "mayfly", "termite", "aphid", "aphides", "cicada", "flea", "louse",
    "lice", "spider", "spiders", "scorpion", "mite", "tick", "crab", "crabs", "lobster",
    "shrimp", "prawn", "barnacle", "barnacles", "crustacean", "crustaceans", "snail",
    "snails", "slug", "slugs", "mussel", "mussels", "oyster", "oysters", "clam", "cockle",
    "cuttlefish", "squid", "octopus", "nautilus", "starfish", "urchin", "anemone", "sponge",
    "sponges", "polyp", "polyps", "jellyfish", "worm", "worms", "earthworm", "leech",
    "parasite", "parasites", "infusoria", "man", "men", "woman", "women", "child", "children",
    "boy", "boys", "girl", "girls", "father", "mother", "son", "daughter", "brother",
    "sister", "uncle", "aunt", "cousin", "family", "families", "tribe", "tribes", "race",
    "races", "nation", "nations", "people", "person", "persons", "savage", "savages",
    "native", "natives", "inhabitant", "settler", "colonist", "farmer", "farmers",
    "gardener", "gardeners", "breeder", "breeders", "fancier", "fanciers", "shepherd",
    "hunter", "hunters", "fisherman", "sailor", "sailors", "traveller", "travellers",
    "collector", "collectors", "observer", "observers", "student", "students", "master",
    "keeper", "owner", "friend", "friends", "neighbour", "stranger", "enemy", "enemies",
    "rival", "rivals", "companion", "companions", "home", "house", "houses", "hut", "cottage",
    "barn", "stable", "stables", "yard", "cage", "cages", "aviary", "hive", "hives", "nest",
    "nests", "burrow", "burrows", "den", "lair", "hole", "holes", "web", "webs", "trap",
    "traps", "net", "nets", "snare", "boat", "boats", "ship", "ships", "voyage", "voyages",
    "journey", "journeys", "road", "roads", "path", "paths", "track", "tracks", "bridge",
    "gate", "gates", "fence", "fences", "wall", "walls", "hedge", "hedges", "ditch",
    "ditches", "well", "wells", "mill", "mills", "market", "markets", "town", "towns",
    "city", "cities", "village", "villages", "england", "britain", "europe", "america",
    "africa", "asia", "australia", "india", "china", "japan", "brazil", "chile", "peru",
    "madeira", "galapagos", "london", "paris", "edinburgh", "cambridge", "oxford", "kent",
    "yorkshire", "devon", "scotland", "ireland", "wales", "france", "germany", "spain",
    "portugal", "italy", "holland", "russia", "sweden", "norway", "body", "bodies", "head",
    "heads", "face", "faces", "neck", "shoulder", "shoulders", "arm", "arms", "hand",
    "hands", "finger", "fingers", "thumb", "nail", "nails", "chest", "back", "hip", "knee",
    "knees", "ankle", "toe", "toes", "mouth", "lips", "tongue", "throat", "nose", "cheek",
    "chin", "brow", "forehead", "think", "thinks", "thinking", "thought", "thoughts", "know",
    "knows", "knowing", "knew", "known", "see", "sees", "seeing", "saw", "seen", "look",
    "looks", "looked", "looking", "watch", "watched", "notice", "noticed", "observe",
    "observes", "remark", "remarked", "find", "finds", "found", "finding", "discover",
    "discovered", "discovery", "search", "searched", "seek", "sought", "examine", "examined",
    "examination", "compare", "compared", "comparison", "measure", "measured", "measurement",
    "count", "counted", "reckon", "estimate", "estimated", "calculate", "calculated", "test",
    "tested", "prove", "proved", "show", "shows", "showed", "shown", "demonstrate", "infer",
    "inferred", "inference", "conclude", "concluded", "conclusion", "suppose", "supposed",
    "supposition", "assume", "assumed", "assumption", "imagine", "imagined", "expect",
    "expected", "expectation", "hope", "hoped", "wish", "wished", "desire", "desired",
    "want", "wanted", "need", "needed", "require", "required", "demand", "demanded", "ask",
    "asked", "question", "questions", "inquire", "inquiry", "learn", "learned", "teach",
    "taught", "understand", "understood", "remember", "remembered", "forget", "forgotten",
    "believe", "believed", "belief", "beliefs", "trust", "trusted", "admit", "admitted",
    "deny", "denied", "assert", "asserted", "maintain", "maintained", "state", "stated",
    "statement", "declare", "declared", "describe", "described", "description", "mention",
    "mentioned", "refer", "referred", "reference", "quote", "quoted", "write", "writes",
    "wrote", "written", "writing", "read", "reads", "reading", "book", "books", "page",
    "pages", "volume", "volumes", "work", "works", "paper", "papers", "journal", "letter",
    "letters", "note", "notes", "list", "lists", "table", "tables", "figure", "figures",
    "diagram", "word", "words", "name", "names", "named", "term", "terms", "phrase",
    "sentence", "sentences", "language", "languages", "live", "lives", "lived", "living",
    "exist", "exists", "existed", "existing", "survive", "survived", "perish", "perished",
    "die", "dies", "died", "dying", "dead", "death", "deaths", "kill", "killed", "destroy",
    "destroyed", "destruction", "injure", "injured", "injury", "injurious", "hurt", "harm",
    "harmful", "damage", "suffer", "suffered", "escape", "escaped", "avoid", "avoided",
    "protect", "protected", "protection", "defend", "defended", "defence", "attack",
    "attacked", "fight", "fights", "fought", "fighting", "battle", "battles", "war", "wars",
    "victory", "defeat", "conquer", "conquered", "prey", "predator", "hunt", "hunted",
    "hunting", "chase", "chased", "catch", "catches", "caught", "capture", "captured",
    "seize", "seized", "devour", "devoured", "eat", "eats", "eating", "ate", "eaten", "feed",
    "feeds", "fed", "feeding", "drink", "drinks", "drank", "swallow", "swallowed", "digest",
    "digested", "starve", "starved", "famine", "hunger", "hungry", "thirst", "thirsty",
    "breed", "breeding", "bred", "pair", "pairs", "paired", "mate", "mates", "mated",
    "court", "courtship", "marriage", "cross", "crosses", "crossed", "crossing", "hybrid",
    "hybrids", "mongrel", "mongrels", "sterile", "sterility", "fertile", "fertility",
    "fertilised", "fertilisation", "reproduce", "reproduction", "multiply", "multiplied",
    "increase", "increased", "increasing", "decrease", "decreased", "diminish", "diminished",
    "produce", "produces", "producing", "product", "production", "yield", "yielded", "bear",
    "bears", "bore", "born", "hatch", "hatched", "rear", "reared", "raise", "raised",
    "nurse", "nursed", "nourish", "nourished", "tend", "tended", "care", "cared", "move",
    "moves", "moved", "moving", "movement", "movements", "motion", "walk", "walks", "walked",
    "walking", "run", "runs", "running", "ran", "leap", "leaps", "leaped", "jump", "jumps",
    "jumped", "spring", "sprang", "climb", "climbs", "climbed", "climbing", "creep",
    "creeps", "crept", "crawl", "crawls", "crawled", "swim", "swims", "swimming", "swam",
    "dive", "dives", "dived", "float", "floats", "floated", "drift", "drifted", "sink",
    "sinks", "sank", "sunk", "rise", "rises", "rose", "risen", "rising", "fall", "falls",
    "fell", "fallen", "falling", "drop", "drops", "dropped", "fly", "flew", "flown",
    "flying", "flight", "flights", "soar", "soared", "hover", "hovered", "glide", "glided",
    "perch", "perched", "alight", "alighted", "migrate", "migrated", "migration",
    "migratory", "wander", "wandered", "wandering", "roam", "roamed", "travel", "travelled",
    "journeyed", "visit", "visited", "arrive", "arrived", "arrival", "depart", "departed",
    "departure", "return", "returned", "leave", "leaves", "left", "leaving", "stay",
    "stayed", "remain", "remains", "remained", "remaining", "settle", "settled",
    "settlement", "spread", "spreads", "spreading", "scatter", "scattered", "disperse",
    "dispersed", "dispersal", "transport", "transported", "carry", "carries", "carried",
    "carrying", "bring", "brings", "brought", "bringing", "take", "takes", "took", "taken",
    "taking", "give", "gives", "gave", "given", "giving", "send", "sends", "sent", "receive",
    "received", "obtain", "obtained", "acquire", "acquired", "gain", "gained", "lose",
    "loses", "lost", "losing", "loss", "losses", "keep", "keeps", "kept", "keeping", "hold",
    "holds", "held", "holding", "grasp", "grasped", "drag", "dragged", "draw", "draws",
    "drew", "drawn", "push", "pushed", "pull", "pulled", "lift", "lifted", "throw", "threw",
    "thrown", "cast", "strike", "struck", "beat", "beaten", "hit", "touch", "touched",
    "press", "pressed", "pressure", "rub", "rubbed", "scratch", "scratched", "bite", "bites",
    "bitten", "sting", "stings", "stung", "pierce", "pierced", "cut", "cuts", "cutting",
    "tear", "torn", "break", "breaks", "broke", "broken", "breaking", "crack", "cracked",
    "split", "splits", "burst", "crush", "crushed", "grind", "ground", "bend", "bent",
    "twist", "twisted", "curl", "curled", "curve", "curves", "curved", "straight", "crooked",
    "flat", "round", "rounded", "square", "angular", "pointed", "blunt", "sharp", "smooth",
    "rough", "hard", "soft", "firm", "loose", "tight", "thick", "thin", "broad", "narrow",
    "deep", "shallow", "high", "low", "tall", "short", "big", "little", "huge", "tiny",
    "minute", "gigantic", "enormous", "vast", "immense", "strong", "stronger", "strongest",
    "weak", "weaker", "weakest", "strength", "weakness", "vigour", "vigorous", "feeble",
    "sturdy", "hardy", "delicate", "tender", "swift", "swifter", "rapid", "quick", "quickly",
    "fast", "faster", "speed", "heavy", "heavier", "massive", "solid", "hollow", "empty",
    "full", "filled", "complete", "completed", "incomplete", "entire", "partial", "perfect",
    "perfection", "imperfection", "pure", "purity", "impure", "clean", "dirty", "fresh",
    "stale", "new", "newer", "newest", "young", "younger", "youngest", "older", "oldest",
    "early", "earlier", "earliest", "late", "later", "latest", "first", "second", "third",
    "fourth", "fifth", "last", "next", "former", "latter", "final", "finally", "begin",
    "begins", "began", "begun", "beginning", "start", "started", "starting", "end", "ends",
    "ended", "ending", "finish", "finished", "cease", "ceased", "stop", "stopped", "pause",
    "paused", "continue", "continued", "continuous", "constant", "constantly", "frequent",
    "frequently", "occasional", "occasionally", "seldom", "rarely", "never", "always",
    "often", "sometimes", "usually", "commonly", "ordinarily", "regularly", "irregularly",
    "again", "twice", "thrice", "once", "repeatedly", "repeated", "repetition", "succeed",
    "succeeded", "success", "successful", "failure", "failed", "fail", "attempt",
    "attempted", "try", "tried", "trying", "effort", "efforts", "labour", "laboured",
    "toil", "task", "tasks", "duty", "duties", "service", "services", "help", "helped",
    "helpful", "aid", "aided", "assist", "assisted", "assistance", "support", "supported",
    "supply", "supplied", "provide", "provided", "furnish", "furnished", "prepare",
    "prepared", "preparation", "arrange", "arranged", "arrangement", "organise",
    "organised", "organisation", "build", "builds", "built", "building", "construct",
    "constructed", "construction", "make", "makes", "made", "making", "create", "created",
    "creation", "invent", "invented", "invention", "devise", "devised", "contrive",
    "contrived", "contrivance", "adapt", "adaptation", "adaptations", "adjust", "adjusted",
    "fit", "fits", "fitted", "fitness", "suit", "suited", "suitable", "unsuitable", "proper",
    "improper", "correct", "incorrect", "right", "wrong", "true", "false", "truth", "error",
    "errors", "mistake", "mistakes", "exact", "exactly", "accurate", "accuracy",
    "inaccurate", "precise", "precisely", "vague", "obscure", "clear", "clearly", "plain",
    "plainly", "evident", "evidently", "obvious", "obviously", "apparent", "apparently",
    "manifest", "manifestly", "visible", "invisible", "hidden", "concealed", "exposed",
    "open", "opened", "closed", "shut", "covered", "uncovered", "bare", "naked", "clothed",
];
